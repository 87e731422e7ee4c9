#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paremia/corpus.hpp"
#include "paremia/sentiment.hpp"

namespace paremia {

// Per-region sentiment counts. Ambiguous mass counts toward both layers:
// pos_pct = (n_pos + n_amb) / n, neg_pct = (n_neg + n_amb) / n.
struct RegionAggregate {
  std::string region_key;
  std::optional<double> lat;  // mean of member coordinates, when any exist
  std::optional<double> lon;
  long n = 0;
  long n_pos = 0;
  long n_neg = 0;
  long n_amb = 0;

  double pos_pct() const { return n ? static_cast<double>(n_pos + n_amb) / n : 0.0; }
  double neg_pct() const { return n ? static_cast<double>(n_neg + n_amb) / n : 0.0; }
};

struct Grouping {
  enum class Mode { ByPlace, ByGrid } mode = Mode::ByPlace;
  double cell_degrees = 0.1;  // ByGrid cell size
};

struct SentimentPoint {
  std::string proverb_id;
  Sentiment sentiment = Sentiment::Ambiguous;
  std::optional<std::string> place;
  std::optional<double> lat;
  std::optional<double> lon;
};

struct AggregateResult {
  std::vector<RegionAggregate> regions;  // ordered by region_key
  size_t skipped = 0;                    // inputs lacking the grouping key
};

// Groups predictions by place name or by grid cell; proverbs without the
// grouping key are skipped and counted. Throws DataError when nothing is
// groupable.
AggregateResult aggregate_regions(std::span<const SentimentPoint> points, const Grouping& grouping);

enum class MapLayer { Positive, Negative };

// GeoJSON FeatureCollection of Point features with properties
// {region, n, pos_pct, neg_pct, layer_value}; coordinates [lon, lat].
// Aggregates without coordinates become null-geometry features.
std::string aggregates_to_geojson(std::span<const RegionAggregate> aggregates, MapLayer layer);
void emit_geojson(std::span<const RegionAggregate> aggregates, MapLayer layer,
                  const std::string& path);

// companion CSV: region_key,lat,lon,n,n_pos,n_neg,n_amb,pos_pct,neg_pct
void save_region_csv(std::span<const RegionAggregate> aggregates, const std::string& path);

// Reload helper for round-trip checks and downstream tooling.
std::vector<RegionAggregate> load_geojson_aggregates(const std::string& path);

}  // namespace paremia
