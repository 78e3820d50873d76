#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "mphp/grouping.hpp"
#include "mphp/metrics.hpp"
#include "mphp/rf_precoder.hpp"

namespace mphp {

/// Precoding schemes compared by the experiments. Only kMphp is the scheme
/// under study; the others are representative stand-ins:
///   kFullDigitalZf   ZF directly on H, the full-CSI upper reference.
///   kFrpsStatistical fully-connected phase-only projection of the group
///                    eigenvectors, ZF on the K x K effective channel.
///   kFixedSubarray   static contiguous subarrays, phases aligned to the
///                    instantaneous channel of each chain's user.
///   kAdaptiveInstant per-antenna chain selection by instantaneous gain.
enum class SchemeId { kMphp, kFullDigitalZf, kFrpsStatistical, kFixedSubarray, kAdaptiveInstant };

inline constexpr std::array<SchemeId, 5> kAllSchemes = {
    SchemeId::kMphp, SchemeId::kFullDigitalZf, SchemeId::kFrpsStatistical,
    SchemeId::kFixedSubarray, SchemeId::kAdaptiveInstant};

std::string_view scheme_name(SchemeId scheme);
std::optional<SchemeId> parse_scheme(std::string_view name);

/// True when the RF precoder is designed from channel statistics.
bool uses_statistical_rf(SchemeId scheme);
Connectivity scheme_connectivity(SchemeId scheme);
CsiTimescale scheme_timescale(SchemeId scheme);

struct DesignOptions {
  int bits = 4;
  double total_power = 1.0;
  RelaxedOptions relaxed;
};

/// Everything a scheme fixes for the whole statistics period. It is built
/// from correlations (through the grouping) and never sees a channel draw.
struct LongTermDesign {
  SchemeId scheme = SchemeId::kMphp;
  Grouping grouping;
  ComplexMatrix rf;                 // M x L for statistical schemes, empty otherwise
  std::optional<RfPrecoder> structured;  // MPHP only
  RelaxedSolution relaxed;          // MPHP only
};

LongTermDesign design_long_term(SchemeId scheme, const Grouping& grouping,
                                const DesignOptions& options);

/// Short-timescale precoding for one channel draw.
SlotPrecoding build_slot_precoding(const LongTermDesign& design, const ComplexMatrix& channel,
                                   const DesignOptions& options);

/// Antenna m (0-based) -> chain ceil((m + 1) L / M) - 1.
std::vector<int> fixed_subarray_map(Index antenna_count, int chain_count);

/// Chain l serves user l; phases follow the angle of h_{l,m}.
RfPrecoder fixed_subarray_rf(const ComplexMatrix& channel, int bits);

/// Each antenna joins the chain whose user sees it strongest; chains left
/// empty take the antenna that costs the least gain to move.
RfPrecoder adaptive_instant_rf(const ComplexMatrix& channel, int bits);

/// Fully-connected: column for chain i of group g is the quantized
/// phase-only version of the i-th dominant eigenvector of R_g.
ComplexMatrix frps_statistical_rf(const Grouping& grouping, int bits);

}  // namespace mphp
