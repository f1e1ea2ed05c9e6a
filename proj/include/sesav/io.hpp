#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sesav/harness.hpp"

namespace sesav {

/// CSV schema: step,time,sup_norm,original_energy,modified_energy,aux,g,mbp_ok,diverged
/// Floats carry 17 significant digits; NaN g (SAV schemes) serializes as an
/// empty column; booleans as 1/0.
std::string csv_string(std::span<const StepDiagnostics> series);
void write_csv(const std::filesystem::path& path, std::span<const StepDiagnostics> series);

/// Snapshot layout (little-endian): magic "ACFD", u32 version = 1, u32 M,
/// u32 M, f64 time, then M*M f64 values row-major.
void write_snapshot(const std::filesystem::path& path, const Field& field, double time);
Field read_snapshot(const std::filesystem::path& path, double* time_out = nullptr);

std::string convergence_csv_string(std::span<const ConvergenceRecord> records);
void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceRecord> records);

std::string comparison_csv_string(std::span<const ComparisonRow> rows);
void write_comparison_csv(const std::filesystem::path& path, std::span<const ComparisonRow> rows);

} // namespace sesav
