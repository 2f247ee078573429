#include "harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace ch::harness {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    const char* c = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw config_error("invalid number for key '" + key + "': '" + v + "'", line);
    return x;
}

long parse_long(const std::string& v, const std::string& key, int line) {
    const char* c = v.c_str();
    char* end = nullptr;
    const long x = std::strtol(c, &end, 10);
    if (end == c || *end != '\0')
        throw config_error("invalid integer for key '" + key + "': '" + v + "'", line);
    return x;
}

void expect_one_of(const std::string& v, std::initializer_list<const char*> allowed,
                   const std::string& key, int line) {
    for (const char* a : allowed)
        if (v == a) return;
    std::ostringstream msg;
    msg << "invalid value '" << v << "' for key '" << key << "' (expected one of:";
    for (const char* a : allowed) msg << " " << a;
    msg << ")";
    throw config_error(msg.str(), line);
}

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (value.empty()) throw config_error("empty value for key '" + key + "'", line);

    if (key == "scheme") {
        expect_one_of(value, {"first", "second"}, key, line);
        cfg.scheme = value;
    } else if (key == "a") {
        cfg.a = parse_double(value, key, line);
    } else if (key == "b") {
        cfg.b = parse_double(value, key, line);
    } else if (key == "k") {
        const long k = parse_long(value, key, line);
        if (k < 2 || k > 30) throw config_error("k out of range [2,30]: " + value, line);
        cfg.k = int(k);
    } else if (key == "nx") {
        const long nx = parse_long(value, key, line);
        if (nx < 4) throw config_error("nx must be >= 4: " + value, line);
        cfg.nx = nx;
    } else if (key == "t_final") {
        const double t = parse_double(value, key, line);
        if (!(t >= 0) || !std::isfinite(t))
            throw config_error("t_final must be >= 0: " + value, line);
        cfg.t_final = t;
    } else if (key == "ic") {
        expect_one_of(value, {"single_peakon", "two_peakon", "antipeakon_pair", "file"}, key,
                      line);
        cfg.ic = value;
    } else if (key == "ic_file") {
        cfg.ic_file = value;
    } else if (key == "cfl") {
        expect_one_of(value, {"practical", "strict"}, key, line);
        cfg.cfl = value;
    } else if (key == "nu") {
        const double nu = parse_double(value, key, line);
        if (!(nu > 0 && nu <= 1)) throw config_error("nu out of range (0,1]: " + value, line);
        cfg.nu = nu;
    } else if (key == "theta") {
        const double th = parse_double(value, key, line);
        if (!(th > 0)) throw config_error("theta must be > 0: " + value, line);
        cfg.theta = th;
    } else if (key == "big_c") {
        const double c = parse_double(value, key, line);
        if (!(c > 0)) throw config_error("big_c must be > 0: " + value, line);
        cfg.big_c = c;
    } else if (key == "sampling") {
        expect_one_of(value, {"point", "cell_average"}, key, line);
        cfg.sampling = value;
    } else if (key == "snapshots") {
        const long n = parse_long(value, key, line);
        if (n < 0) throw config_error("snapshots must be >= 0: " + value, line);
        cfg.snapshots = int(n);
    } else if (key == "snapshot_times") {
        cfg.snapshot_times.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const double t = parse_double(item, key, line);
            if (!(t >= 0)) throw config_error("snapshot time must be >= 0: " + item, line);
            cfg.snapshot_times.push_back(t);
        }
        if (cfg.snapshot_times.empty())
            throw config_error("empty value for key '" + key + "'", line);
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "pressure_solves") {
        const long n = parse_long(value, key, line);
        if (n != 1 && n != 2)
            throw config_error("pressure_solves must be 1 or 2: " + value, line);
        cfg.pressure_solves = int(n);
    } else if (key == "case") {
        expect_one_of(value, {"single", "two_peakon"}, key, line);
        cfg.case_name = value;
    } else if (key == "kmin") {
        const long k = parse_long(value, key, line);
        if (k < 2 || k > 30) throw config_error("kmin out of range [2,30]: " + value, line);
        cfg.kmin = int(k);
    } else if (key == "kmax") {
        const long k = parse_long(value, key, line);
        if (k < 2 || k > 30) throw config_error("kmax out of range [2,30]: " + value, line);
        cfg.kmax = int(k);
    } else if (key == "schemes") {
        expect_one_of(value, {"first", "second", "both"}, key, line);
        cfg.schemes = value;
    } else {
        throw config_error("unknown key '" + key + "'", line);
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("expected key=value, got '" + stripped + "'", lineno);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw config_error("missing key before '='", lineno);
        apply_key(cfg, key, value, lineno);
    }
    return cfg;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "scheme",    "a",              "b",      "k",               "nx",
        "t_final",   "ic",             "ic_file", "cfl",            "nu",
        "theta",     "big_c",          "sampling", "snapshots",     "snapshot_times",
        "output",    "pressure_solves", "case",   "kmin",           "kmax",
        "schemes"};
    return keys;
}

}  // namespace ch::harness
