#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvlab/field.hpp"

namespace pvlab {

// Line-oriented "key = value" configuration with optional [section] headers;
// keys inside a section are exposed as "section.key".  '#' starts a comment.
using Config = std::map<std::string, std::string>;

Config read_config(const std::string& path);
Config parse_config(const std::string& text);

std::string config_get(const Config& c, const std::string& key, const std::string& dflt);
double config_get(const Config& c, const std::string& key, double dflt);
int config_get(const Config& c, const std::string& key, int dflt);

// CSV with a header row; every value is printed with %.17g so that rewriting
// and re-reading is bit-faithful and output is byte-stable run to run.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Two-column whitespace-separated series for generic plotting tools.
void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y);

// Field dump: flat little-endian float64, row-major with x1 slowest and x3
// fastest, one file per field named <base>_<field>.f64, plus a JSON sidecar
// <base>.json with shape, grid extents, time, and the field-name order.
void dump_fields(const std::string& base, const Grid& g, double time,
                 const std::vector<std::pair<std::string, const Field*>>& fields);

// Read back one component of a dump (for tests and post-processing).
std::vector<double> read_f64(const std::string& path);

// Worker-parallelism cap from PVLAB_THREADS (>= 1; 1 when unset or invalid).
int pvlab_threads();

} // namespace pvlab
