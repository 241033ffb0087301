#pragma once

#include "nodalheat/errors.hpp"
#include "nodalheat/fields.hpp"
#include "nodalheat/report.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace nodalheat {

/// Bad command line or config file; the runner maps it to exit status 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Settings of one run. Zero or empty means "experiment default".
struct RunConfig {
    std::string experiment;
    std::string model;        // kind:params, e.g. torus:1,1 or rect:1,1,1,1
    int grid = 0;             // cells along x (or per unit length for shapes)
    std::string times;        // a:b:n, log-spaced
    std::size_t paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 12345;
    bool bridge = true;
    std::string out = "nodalheat-out";
    bool emit_fields = false;
    bool quick = false;
    int threads = 0;          // 0 keeps the OpenMP default
    int domain = 0;           // 0-based nodal domain index (label - 1)
    double alpha = 0.0;       // cone opening
    double r = 0.0;           // cone stopping radius
    double c = 0.0;           // thin-domain tube constant
    double c1 = 0.5;          // heat-content constant for the ball search
    double bias = 0.0;        // cone bias allowance override
};

std::vector<std::string> experiment_names();

/// "torus:1,1", "rect:m,n,a,b", "disk:m,k,R" or "cone:k".
EigenfunctionModel parse_model(const std::string& spec);
/// "a:b:n" to n log-spaced times from a to b.
std::vector<double> parse_times(const std::string& spec);

/// Flat key=value text; '#' starts a comment. Keys mirror the long flags.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);
/// Applies one setting; throws ConfigError for unknown keys and bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Runs one experiment (or the suite) and returns its reports without writing.
std::vector<ExperimentReport> run_experiment(const RunConfig& cfg);

/// Runs, writes artifacts under cfg.out and prints one line per report.
/// Returns 0 on pass or report-only, 1 on any failed check, 2 on usage,
/// config or output errors.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace nodalheat
