#pragma once

// key=value run configuration ('#' comments, one key per line) shared by the
// CLI flags and config files; every value funnels through apply_key so both
// paths get the same validation.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ch::harness {

class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line(line) {}
    int line;
};

class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string scheme = "first";        // first | second
    std::optional<double> a, b;          // domain; defaults depend on ic
    std::optional<int> k;                // nx = 2^k
    std::optional<long> nx;
    std::optional<double> t_final;
    std::string ic;                      // single_peakon | two_peakon | antipeakon_pair | file
    std::string ic_file;
    std::string cfl = "practical";       // practical | strict
    std::optional<double> nu;            // default 0.9 (run); 0.2/0.3 per scheme (convergence)
    double theta = 1.0;
    double big_c = 1.0;
    std::string sampling;                // point | cell_average; default by context
    int snapshots = 50;
    std::vector<double> snapshot_times;  // explicit override of the even spacing
    std::string output = "out";
    int pressure_solves = 2;             // second-order elliptic solves per step
    std::string case_name;               // convergence: single | two_peakon
    std::optional<int> kmin, kmax;
    std::string schemes = "both";        // convergence: first | second | both
};

// set one key; line is used for error messages (0 = not from a file)
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value, int line);

RunConfig parse_config(const std::string& text);

// all recognized keys, in canonical order (drives the CLI flag mirror)
const std::vector<std::string>& config_keys();

}  // namespace ch::harness
