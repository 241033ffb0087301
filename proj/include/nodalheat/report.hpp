#pragma once

#include "nodalheat/errors.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nodalheat {

/// One tolerance test. relation is one of "<=", ">=", "abs", "rel", "true".
struct Check {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    std::string relation;
    bool passed = false;
    bool report_only = false;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Grid matrix written row by row (j = 0 first).
struct MatrixDump {
    std::string name;
    int nx = 0;
    int ny = 0;
    std::vector<double> values;
};

enum class Verdict { Pass, Fail, ReportOnly };
std::string verdict_name(Verdict v);

class OutputError : public Error {
public:
    using Error::Error;
};

/// Named constants, references, checks and tables of one experiment. Entries
/// keep insertion order so the text form is stable.
struct ExperimentReport {
    std::string name;
    std::string topic;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, double>> measured;
    std::vector<std::pair<std::string, double>> references;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    std::vector<Table> tables;
    std::vector<MatrixDump> matrices;

    void input(const std::string& key, const std::string& value);
    void input(const std::string& key, double value);
    void measure(const std::string& key, double value);
    void reference(const std::string& key, double value);
    void note(const std::string& text);

    /// value <= bound + tolerance
    const Check& check_le(const std::string& name, double value, double bound, double tolerance = 0.0,
                          bool report_only = false);
    /// value >= bound - tolerance
    const Check& check_ge(const std::string& name, double value, double bound, double tolerance = 0.0,
                          bool report_only = false);
    /// |value - reference| <= tolerance
    const Check& check_abs(const std::string& name, double value, double reference, double tolerance,
                           bool report_only = false);
    /// |value - reference| <= tolerance·|reference|
    const Check& check_rel(const std::string& name, double value, double reference, double tolerance,
                           bool report_only = false);
    const Check& check_true(const std::string& name, bool condition, bool report_only = false);

    /// Fail if any enforced check failed; Pass if at least one enforced check
    /// exists; ReportOnly otherwise.
    Verdict verdict() const;
    const Check* find_check(const std::string& name) const;
    double measured_value(const std::string& key) const;
};

/// %.17g, the format used for every real in reports and CSV files.
std::string format_real(double v);
std::string format_report(const ExperimentReport& report);
std::string format_csv(const Table& table);
std::string format_matrix_csv(const MatrixDump& matrix);

/// Writes <name>.report.txt plus one CSV per table and matrix; returns the
/// file names. Throws OutputError when the directory cannot be written.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::filesystem::path& dir);

} // namespace nodalheat
