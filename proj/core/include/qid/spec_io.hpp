#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qid/charfn.hpp"
#include "qid/model.hpp"

namespace qid {

/// Parses a distribution spec document. Tabulated densities name a CSV file
/// ("x,density" header) resolved against `base_dir`. Throws InputError on
/// malformed JSON, schema violations or invariant failures.
Distribution parse_distribution(std::string_view json_text, const std::filesystem::path& base_dir = ".");

/// Reads and parses a spec file.
Distribution load_distribution(const std::filesystem::path& path);

/// Reads a "x,density" CSV with uniform x spacing.
Tabulated load_tabulated_csv(const std::filesystem::path& path);

/// {"z_scan_min": .., "refine_tol": ..}; missing keys keep their defaults.
ScanConfig parse_scan_config(std::string_view json_text);

}  // namespace qid
