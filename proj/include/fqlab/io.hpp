#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fqlab/expseries.hpp"
#include "fqlab/exppoly.hpp"
#include "fqlab/rootfind.hpp"
#include "fqlab/spectral.hpp"
#include "fqlab/verify.hpp"

// JSON/CSV serialization. Every number in JSON is written as a shortest
// round-trip decimal string; readers accept strings or plain numbers.
// Malformed input throws Error(ErrorKind::Parse).
namespace fqlab::io {

std::string format_decimal(double v);
double parse_decimal(std::string_view s);

std::string polynomial_to_json(const ExpPolynomial& p);
ExpPolynomial polynomial_from_json(std::string_view text);

std::string zeroset_to_json(const ZeroSet& zs);
ZeroSet zeroset_from_json(std::string_view text);
/// Columns lambda,p_abs,dp_abs.
std::string zeroset_to_csv(const ZeroSet& zs);

std::string series_to_json(const ExpSeries& f);
ExpSeries series_from_json(std::string_view text, SeriesParams params = {});

std::string spectrum_to_json(const AtomicMeasure& mu);
AtomicMeasure spectrum_from_json(std::string_view text);

/// Runtimes are left out so repeated runs are byte-identical.
std::string report_to_json(const VerificationReport& report);
VerificationReport report_from_json(std::string_view text);

/// Throws Error(ErrorKind::InvalidArgument) when the file cannot be read.
std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace fqlab::io
