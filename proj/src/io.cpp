#include "sesav/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sesav {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_all(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

std::string csv_string(std::span<const StepDiagnostics> series) {
    std::string out = "step,time,sup_norm,original_energy,modified_energy,aux,g,mbp_ok,diverged\n";
    for (const StepDiagnostics& d : series) {
        out += std::to_string(d.step);
        out += ',';
        out += fmt17(d.time);
        out += ',';
        out += fmt17(d.sup_norm);
        out += ',';
        out += fmt17(d.original_energy);
        out += ',';
        out += fmt17(d.modified_energy);
        out += ',';
        out += fmt17(d.aux);
        out += ',';
        if (!std::isnan(d.g)) out += fmt17(d.g);
        out += ',';
        out += d.mbp_ok ? '1' : '0';
        out += ',';
        out += d.diverged ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, std::span<const StepDiagnostics> series) {
    write_all(path, csv_string(series));
}

void write_snapshot(const std::filesystem::path& path, const Field& field, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    const std::uint32_t version = 1;
    const std::uint32_t m = static_cast<std::uint32_t>(field.points());
    out.write("ACFD", 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&time), 8);
    const auto vals = field.values();
    out.write(reinterpret_cast<const char*>(vals.data()),
              static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Field read_snapshot(const std::filesystem::path& path, double* time_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    char magic[4];
    std::uint32_t version = 0, m1 = 0, m2 = 0;
    double time = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&m1), 4);
    in.read(reinterpret_cast<char*>(&m2), 4);
    in.read(reinterpret_cast<char*>(&time), 8);
    if (!in || std::memcmp(magic, "ACFD", 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path.string());
    if (version != 1) throw std::runtime_error("snapshot: unsupported version");
    if (m1 != m2 || m1 == 0) throw std::runtime_error("snapshot: bad dimensions");
    Field field(Grid(1.0, static_cast<int>(m1)));  // snapshots carry no domain length
    auto vals = field.values();
    in.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw std::runtime_error("snapshot: truncated file " + path.string());
    if (time_out) *time_out = time;
    return field;
}

std::string convergence_csv_string(std::span<const ConvergenceRecord> records) {
    std::string out = "tau,l2_error,observed_order\n";
    for (const ConvergenceRecord& r : records) {
        out += fmt17(r.tau);
        out += ',';
        out += fmt17(r.l2_error);
        out += ',';
        if (!std::isnan(r.observed_order)) out += fmt17(r.observed_order);
        out += '\n';
    }
    return out;
}

void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceRecord> records) {
    write_all(path, convergence_csv_string(records));
}

std::string comparison_csv_string(std::span<const ComparisonRow> rows) {
    std::string out = "scheme,kappa,max_sup_norm,mbp_violated,energy_violations,diverged,final_energy\n";
    for (const ComparisonRow& r : rows) {
        out += scheme_name(r.scheme);
        out += ',';
        out += fmt17(r.kappa);
        out += ',';
        out += fmt17(r.max_sup_norm);
        out += ',';
        out += r.mbp_violated ? '1' : '0';
        out += ',';
        out += std::to_string(r.energy_violations);
        out += ',';
        out += r.diverged ? '1' : '0';
        out += ',';
        out += fmt17(r.final_original_energy);
        out += '\n';
    }
    return out;
}

void write_comparison_csv(const std::filesystem::path& path,
                          std::span<const ComparisonRow> rows) {
    write_all(path, comparison_csv_string(rows));
}

} // namespace sesav
