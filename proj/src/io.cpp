#include "pvlab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pvlab {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}
} // namespace

Config parse_config(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        c[key] = val;
    }
    return c;
}

Config read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_get(const Config& c, const std::string& key, const std::string& dflt) {
    auto it = c.find(key);
    return it == c.end() ? dflt : it->second;
}
double config_get(const Config& c, const std::string& key, double dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::runtime_error("config key " + key + ": not a number: " + it->second);
    return v;
}
int config_get(const Config& c, const std::string& key, int dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size())
        throw std::runtime_error("config key " + key + ": not an integer: " + it->second);
    return v;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        std::fprintf(f, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            std::fclose(f);
            throw std::runtime_error("csv row width mismatch in " + path);
        }
        for (std::size_t i = 0; i < row.size(); ++i)
            std::fprintf(f, "%.17g%s", row[i], i + 1 < row.size() ? "," : "\n");
    }
    std::fclose(f);
}

void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::runtime_error("series length mismatch: " + path);
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < x.size(); ++i)
        std::fprintf(f, "%.17g %.17g\n", x[i], y[i]);
    std::fclose(f);
}

void dump_fields(const std::string& base, const Grid& g, double time,
                 const std::vector<std::pair<std::string, const Field*>>& fields) {
    nlohmann::json meta;
    meta["shape"] = {g.g1.n, g.n2, g.n3};
    meta["x1_range"] = {g.g1.a, g.g1.b};
    meta["time"] = time;
    meta["layout"] = "row-major x1 slowest, x3 fastest, little-endian float64";
    std::vector<std::string> names;
    for (const auto& [name, fld] : fields) {
        names.push_back(name);
        const std::string path = base + "_" + name + ".f64";
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open for writing: " + path);
        const std::size_t n = fld->v.size();
        if (std::fwrite(fld->v.data(), sizeof(double), n, f) != n) {
            std::fclose(f);
            std::remove(path.c_str());
            throw std::runtime_error("short write: " + path);
        }
        std::fclose(f);
    }
    meta["fields"] = names;
    std::ofstream out(base + ".json");
    if (!out) throw std::runtime_error("cannot open for writing: " + base + ".json");
    out << meta.dump(2) << "\n";
}

std::vector<double> read_f64(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open: " + path);
    const std::streamsize bytes = in.tellg();
    if (bytes % sizeof(double) != 0)
        throw std::runtime_error("not a float64 dump: " + path);
    std::vector<double> v(static_cast<std::size_t>(bytes) / sizeof(double));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(v.data()), bytes);
    if (!in) throw std::runtime_error("short read: " + path);
    return v;
}

int pvlab_threads() {
    const char* s = std::getenv("PVLAB_THREADS");
    if (!s) return 1;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 1) return 1;
    return static_cast<int>(v);
}

} // namespace pvlab
