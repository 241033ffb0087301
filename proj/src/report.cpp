#include "nodalheat/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nodalheat {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::ReportOnly: return "REPORT-ONLY";
    }
    return "FAIL";
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ExperimentReport::input(const std::string& key, const std::string& value) { inputs.emplace_back(key, value); }
void ExperimentReport::input(const std::string& key, double value) { inputs.emplace_back(key, format_real(value)); }
void ExperimentReport::measure(const std::string& key, double value) { measured.emplace_back(key, value); }
void ExperimentReport::reference(const std::string& key, double value) { references.emplace_back(key, value); }
void ExperimentReport::note(const std::string& text) { notes.push_back(text); }

namespace {
const Check& add(ExperimentReport& r, Check c) {
    r.checks.push_back(std::move(c));
    return r.checks.back();
}
} // namespace

const Check& ExperimentReport::check_le(const std::string& n, double value, double bound, double tol, bool ro) {
    return add(*this, {n, value, bound, tol, "<=", value <= bound + tol, ro});
}

const Check& ExperimentReport::check_ge(const std::string& n, double value, double bound, double tol, bool ro) {
    return add(*this, {n, value, bound, tol, ">=", value >= bound - tol, ro});
}

const Check& ExperimentReport::check_abs(const std::string& n, double value, double ref, double tol, bool ro) {
    return add(*this, {n, value, ref, tol, "abs", std::abs(value - ref) <= tol, ro});
}

const Check& ExperimentReport::check_rel(const std::string& n, double value, double ref, double tol, bool ro) {
    return add(*this, {n, value, ref, tol, "rel", std::abs(value - ref) <= tol * std::abs(ref), ro});
}

const Check& ExperimentReport::check_true(const std::string& n, bool condition, bool ro) {
    return add(*this, {n, condition ? 1.0 : 0.0, 1.0, 0.0, "true", condition, ro});
}

Verdict ExperimentReport::verdict() const {
    bool enforced = false;
    for (const Check& c : checks) {
        if (c.report_only) continue;
        enforced = true;
        if (!c.passed) return Verdict::Fail;
    }
    return enforced ? Verdict::Pass : Verdict::ReportOnly;
}

const Check* ExperimentReport::find_check(const std::string& n) const {
    for (const Check& c : checks) {
        if (c.name == n) return &c;
    }
    return nullptr;
}

double ExperimentReport::measured_value(const std::string& key) const {
    for (const auto& [k, v] : measured) {
        if (k == key) return v;
    }
    throw Error("no measured value named " + key);
}

std::string format_report(const ExperimentReport& r) {
    std::ostringstream out;
    out << "name = " << r.name << '\n';
    out << "topic = " << r.topic << '\n';
    out << "verdict = " << verdict_name(r.verdict()) << '\n';
    for (const auto& [k, v] : r.inputs) out << "input." << k << " = " << v << '\n';
    for (const auto& [k, v] : r.measured) out << "measured." << k << " = " << format_real(v) << '\n';
    for (const auto& [k, v] : r.references) out << "reference." << k << " = " << format_real(v) << '\n';
    for (const Check& c : r.checks) {
        const std::string p = "check." + c.name + ".";
        out << p << "value = " << format_real(c.value) << '\n';
        out << p << "reference = " << format_real(c.reference) << '\n';
        out << p << "tolerance = " << format_real(c.tolerance) << '\n';
        out << p << "relation = " << c.relation << '\n';
        out << p << "result = " << (c.passed ? "pass" : "fail") << (c.report_only ? " (report-only)" : "") << '\n';
    }
    for (std::size_t k = 0; k < r.notes.size(); ++k) out << "note." << k << " = " << r.notes[k] << '\n';
    for (const Table& t : r.tables) out << "table." << t.name << " = " << r.name << '.' << t.name << ".csv\n";
    for (const MatrixDump& m : r.matrices) out << "matrix." << m.name << " = " << r.name << '.' << m.name << ".csv\n";
    return out.str();
}

std::string format_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_real(row[c]);
        out << '\n';
    }
    return out.str();
}

std::string format_matrix_csv(const MatrixDump& m) {
    std::ostringstream out;
    for (int i = 0; i < m.nx; ++i) out << (i ? "," : "") << "c" << i;
    out << '\n';
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            out << (i ? "," : "") << format_real(m.values[static_cast<std::size_t>(j) * m.nx + i]);
        }
        out << '\n';
    }
    return out.str();
}

namespace {
void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot write " + path.string());
    f << text;
    if (!f) throw OutputError("cannot write " + path.string());
}
} // namespace

std::vector<std::string> emit_report(const ExperimentReport& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
    std::vector<std::string> files;
    const std::string base = r.name + ".report.txt";
    write_file(dir / base, format_report(r));
    files.push_back(base);
    for (const Table& t : r.tables) {
        const std::string f = r.name + "." + t.name + ".csv";
        write_file(dir / f, format_csv(t));
        files.push_back(f);
    }
    for (const MatrixDump& m : r.matrices) {
        const std::string f = r.name + "." + m.name + ".csv";
        write_file(dir / f, format_matrix_csv(m));
        files.push_back(f);
    }
    return files;
}

} // namespace nodalheat
