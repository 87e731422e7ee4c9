#include "paremia/geomap.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "paremia/csv.hpp"
#include "paremia/errors.hpp"

namespace paremia {

namespace {

using nlohmann::ordered_json;

struct Accumulator {
  long n_pos = 0, n_neg = 0, n_amb = 0;
  double lat_sum = 0.0, lon_sum = 0.0;
  long coord_count = 0;
};

std::string grid_key(double lat, double lon, double cell) {
  const long iy = static_cast<long>(std::floor(lat / cell));
  const long ix = static_cast<long>(std::floor(lon / cell));
  return "grid(" + std::to_string(iy) + "," + std::to_string(ix) + ")";
}

}  // namespace

AggregateResult aggregate_regions(std::span<const SentimentPoint> points,
                                  const Grouping& grouping) {
  if (grouping.mode == Grouping::Mode::ByGrid && grouping.cell_degrees <= 0.0)
    throw ConfigError("aggregate_regions: cell_degrees must be positive");

  AggregateResult result;
  std::map<std::string, Accumulator> groups;
  for (const auto& p : points) {
    std::string key;
    if (grouping.mode == Grouping::Mode::ByPlace) {
      if (!p.place || p.place->empty()) {
        ++result.skipped;
        continue;
      }
      key = *p.place;
    } else {
      if (!p.lat || !p.lon) {
        ++result.skipped;
        continue;
      }
      key = grid_key(*p.lat, *p.lon, grouping.cell_degrees);
    }
    Accumulator& acc = groups[key];
    switch (p.sentiment) {
      case Sentiment::Positive: ++acc.n_pos; break;
      case Sentiment::Negative: ++acc.n_neg; break;
      case Sentiment::Ambiguous: ++acc.n_amb; break;
    }
    if (p.lat && p.lon) {
      acc.lat_sum += *p.lat;
      acc.lon_sum += *p.lon;
      ++acc.coord_count;
    }
  }
  if (groups.empty()) throw DataError("aggregate_regions: no groupable proverbs");

  for (const auto& [key, acc] : groups) {
    RegionAggregate region;
    region.region_key = key;
    region.n_pos = acc.n_pos;
    region.n_neg = acc.n_neg;
    region.n_amb = acc.n_amb;
    region.n = acc.n_pos + acc.n_neg + acc.n_amb;
    if (acc.coord_count > 0) {
      region.lat = acc.lat_sum / acc.coord_count;
      region.lon = acc.lon_sum / acc.coord_count;
    }
    result.regions.push_back(std::move(region));
  }
  return result;
}

std::string aggregates_to_geojson(std::span<const RegionAggregate> aggregates, MapLayer layer) {
  if (aggregates.empty()) throw DataError("emit_geojson: no aggregates");
  ordered_json features = ordered_json::array();
  for (const auto& region : aggregates) {
    ordered_json f;
    f["type"] = "Feature";
    if (region.lat && region.lon) {
      f["geometry"] = {{"type", "Point"}, {"coordinates", {*region.lon, *region.lat}}};
    } else {
      f["geometry"] = nullptr;
    }
    ordered_json props;
    props["region"] = region.region_key;
    props["n"] = region.n;
    props["n_pos"] = region.n_pos;
    props["n_neg"] = region.n_neg;
    props["n_amb"] = region.n_amb;
    props["pos_pct"] = region.pos_pct();
    props["neg_pct"] = region.neg_pct();
    props["layer_value"] = layer == MapLayer::Positive ? region.pos_pct() : region.neg_pct();
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  ordered_json collection;
  collection["type"] = "FeatureCollection";
  collection["features"] = std::move(features);
  return collection.dump(2) + "\n";
}

void emit_geojson(std::span<const RegionAggregate> aggregates, MapLayer layer,
                  const std::string& path) {
  const std::string body = aggregates_to_geojson(aggregates, layer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << body;
  if (!out) throw DataError("write failed: " + path);
}

void save_region_csv(std::span<const RegionAggregate> aggregates, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << "region_key,lat,lon,n,n_pos,n_neg,n_amb,pos_pct,neg_pct\n";
  char buf[32];
  const auto fmt = [&](std::optional<double> v) {
    if (!v) return std::string();
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return std::string(buf);
  };
  for (const auto& r : aggregates) {
    std::snprintf(buf, sizeof buf, "%.6f", r.pos_pct());
    std::string pos = buf;
    std::snprintf(buf, sizeof buf, "%.6f", r.neg_pct());
    std::string neg = buf;
    out << csv::join({r.region_key, fmt(r.lat), fmt(r.lon), std::to_string(r.n),
                      std::to_string(r.n_pos), std::to_string(r.n_neg), std::to_string(r.n_amb),
                      pos, neg})
        << "\n";
  }
}

std::vector<RegionAggregate> load_geojson_aggregates(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid GeoJSON: " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection")
    throw DataError(path + ": not a FeatureCollection");
  std::vector<RegionAggregate> out;
  for (const auto& f : doc.at("features")) {
    RegionAggregate r;
    const auto& props = f.at("properties");
    r.region_key = props.at("region").get<std::string>();
    r.n = props.at("n").get<long>();
    r.n_pos = props.at("n_pos").get<long>();
    r.n_neg = props.at("n_neg").get<long>();
    r.n_amb = props.at("n_amb").get<long>();
    if (!f.at("geometry").is_null()) {
      const auto& coords = f.at("geometry").at("coordinates");
      r.lon = coords.at(0).get<double>();
      r.lat = coords.at(1).get<double>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace paremia
