#pragma once

#include <string>

#include "paremia/errors.hpp"

namespace paremia {

struct ParsedUrl {
  std::string base;  // scheme://host[:port], what httplib::Client expects
  std::string path;  // leading '/', defaults to "/"
};

inline ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("invalid URL (missing scheme): " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.base = url;
    out.path = "/";
  } else {
    out.base = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  return out;
}

}  // namespace paremia
