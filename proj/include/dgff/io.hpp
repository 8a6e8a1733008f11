#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgff/harmonic.hpp"
#include "dgff/interface.hpp"
#include "dgff/loewner.hpp"
#include "dgff/stats.hpp"

namespace dgff {

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t x);

/// Provenance written as the first line of every CSV file.
struct FileStamp {
  std::string config_hash;
  std::uint64_t seed = 0;
};

void write_stamp(std::ostream& os, std::string_view schema, const FileStamp& stamp);

void write_field_csv(std::ostream& os, const Field& f, const FileStamp& stamp);
/// Reads a field CSV written for the same domain (ids must match).
Field read_field_csv(std::istream& is, const DomainPtr& domain);
void write_interface_csv(std::ostream& os, std::span<const Complex> points, const FileStamp& stamp);
void write_zero_arcs_csv(std::ostream& os, std::span<const ZeroArc> arcs, const FileStamp& stamp);
void write_driving_csv(std::ostream& os, const DrivingFunction& W, const FileStamp& stamp);
void write_fixed_frame_csv(std::ostream& os, std::span<const double> s, std::span<const double> Y,
                           const FileStamp& stamp);

/// Dual cells shaded by height quantile, with optional interface polylines.
void write_field_svg(std::ostream& os, const Field& f, std::span<const std::vector<Complex>> curves = {});

/// JSON array of summaries, keys sorted.
std::string summaries_json(std::span<const EnsembleSummary> summaries, int indent = 2);

}  // namespace dgff
