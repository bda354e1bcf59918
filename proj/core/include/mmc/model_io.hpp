#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mmc/factor_pair.hpp"
#include "mmc/solver.hpp"

namespace mmc {

/// Model text format, version 1:
///
///   MMC-MODEL v1
///   <p> <n> <d> <lambda>
///   p lines, the rows of U (d numbers each)
///   n lines, the rows of V (d numbers each)
///
/// Numbers are written in shortest round-trip decimal form, so a saved
/// model reloads bit-identically.
void write_model(std::ostream& out, const FactorPair& f);
FactorPair read_model(std::istream& in, const std::string& source_name = "<stream>");

void save_model(const std::filesystem::path& path, const FactorPair& f);
FactorPair load_model(const std::filesystem::path& path);

/// Trace CSV: "iter,objective,step,unorm,vnorm", one row per iteration
/// starting at 1.
void write_trace_csv(std::ostream& out, const FitTrace& trace);

}  // namespace mmc
