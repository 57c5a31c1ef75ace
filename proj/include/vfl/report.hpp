#pragma once

#include <cstdint>
#include <string>

#include "vfl/example.hpp"
#include "vfl/iso.hpp"
#include "vfl/scaling.hpp"

namespace vfl {

// 17 significant digits; round-trips doubles exactly and keeps reports
// byte-stable across runs
std::string format_double(double x);

// CSV with the fixed header "i,radius,lower,upper,log2_lower,log2_upper",
// LF line endings
std::string profile_csv(const ScalingReport& report);
std::string sweep_csv(const SweepResult& sweep);

std::string scaling_report_json(const ExampleVarifold& ex, const ScalingReport& report,
                                std::uint64_t seed);
std::string build_manifest_json(const ExampleVarifold& ex);
std::string dichotomy_json(const ExampleVarifold& ex, const DichotomyConfig& cfg,
                           const DichotomyResult& result, std::uint64_t seed);
std::string scan_json(const ScanResult& scan, std::uint64_t seed);
std::string iso_report_json(const SweepResult& sweep, const IsoResult& ball,
                            const IsoResult& sphere, std::uint64_t seed);

// FNV-1a over a canonical config rendering; goes into every provenance block
std::uint64_t config_hash(const ExampleConfig& cfg);

// Strict schema: unknown fields are rejected, parse errors carry
// line/column diagnostics.
ExampleConfig parse_example_config(const std::string& json_text);
ExampleConfig load_example_config(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

} // namespace vfl
