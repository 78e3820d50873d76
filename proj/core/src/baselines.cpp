#include "mphp/baselines.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "mphp/baseband.hpp"

namespace mphp {
namespace {

std::vector<int> all_users(Index count) {
  std::vector<int> users(static_cast<std::size_t>(count));
  std::iota(users.begin(), users.end(), 0);
  return users;
}

// ZF across every user on one shared RF matrix; an ill-conditioned
// effective channel silences the slot.
SlotPrecoding single_group_zf(const ComplexMatrix& channel, const ComplexMatrix& rf,
                              const DesignOptions& options) {
  const int K = static_cast<int>(channel.cols());
  SlotPrecoding slot;
  try {
    const ComplexMatrix w = zf_precoder(effective_channel(channel, rf));
    slot.groups.push_back(precode_group(all_users(K), rf, w, options.total_power, K));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNearSingular) throw;
    slot.groups.push_back(silent_group(all_users(K), channel.rows()));
  }
  return slot;
}

}  // namespace

std::string_view scheme_name(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::kMphp: return "MPHP";
    case SchemeId::kFullDigitalZf: return "FULL_DIGITAL_ZF";
    case SchemeId::kFrpsStatistical: return "FRPS_STATISTICAL";
    case SchemeId::kFixedSubarray: return "FIXED_SUBARRAY";
    case SchemeId::kAdaptiveInstant: return "ADAPTIVE_INSTANT";
  }
  return "UNKNOWN";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
  for (const SchemeId s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

bool uses_statistical_rf(SchemeId scheme) {
  return scheme == SchemeId::kMphp || scheme == SchemeId::kFrpsStatistical;
}

Connectivity scheme_connectivity(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::kFullDigitalZf:
    case SchemeId::kFrpsStatistical:
      return Connectivity::kFullyConnected;
    default:
      return Connectivity::kPartiallyConnected;
  }
}

CsiTimescale scheme_timescale(SchemeId scheme) {
  return uses_statistical_rf(scheme) ? CsiTimescale::kMixed : CsiTimescale::kRealTime;
}

std::vector<int> fixed_subarray_map(Index antenna_count, int chain_count) {
  if (antenna_count < chain_count || chain_count < 1) {
    throw Error(ErrorKind::kInvalidInput, "fixed_subarray_map: need 1 <= L <= M");
  }
  std::vector<int> map(static_cast<std::size_t>(antenna_count));
  for (Index m = 0; m < antenna_count; ++m) {
    const Index numerator = (m + 1) * chain_count;
    map[static_cast<std::size_t>(m)] = static_cast<int>((numerator + antenna_count - 1) / antenna_count) - 1;
  }
  return map;
}

RfPrecoder fixed_subarray_rf(const ComplexMatrix& channel, int bits) {
  const Index M = channel.rows();
  const int L = static_cast<int>(channel.cols());
  std::vector<int> chain = fixed_subarray_map(M, L);
  std::vector<int> phase(static_cast<std::size_t>(M));
  for (Index m = 0; m < M; ++m) {
    phase[static_cast<std::size_t>(m)] = quantize_phase(channel(m, chain[static_cast<std::size_t>(m)]), bits);
  }
  return RfPrecoder::from_assignment(L, std::move(chain), std::move(phase), bits);
}

RfPrecoder adaptive_instant_rf(const ComplexMatrix& channel, int bits) {
  const Index M = channel.rows();
  const int L = static_cast<int>(channel.cols());
  if (L > M) throw Error(ErrorKind::kInvalidInput, "adaptive_instant_rf: need K <= M");

  std::vector<int> chain(static_cast<std::size_t>(M), 0);
  std::vector<int> load(static_cast<std::size_t>(L), 0);
  for (Index m = 0; m < M; ++m) {
    Index best = 0;
    channel.row(m).cwiseAbs().maxCoeff(&best);
    chain[static_cast<std::size_t>(m)] = static_cast<int>(best);
    ++load[static_cast<std::size_t>(best)];
  }
  for (int l = 0; l < L; ++l) {
    if (load[static_cast<std::size_t>(l)] > 0) continue;
    Index pick = -1;
    double least_loss = std::numeric_limits<double>::infinity();
    for (Index m = 0; m < M; ++m) {
      const int current = chain[static_cast<std::size_t>(m)];
      if (load[static_cast<std::size_t>(current)] < 2) continue;
      const double loss = std::abs(channel(m, current)) - std::abs(channel(m, l));
      if (loss < least_loss) {
        least_loss = loss;
        pick = m;
      }
    }
    --load[static_cast<std::size_t>(chain[static_cast<std::size_t>(pick)])];
    chain[static_cast<std::size_t>(pick)] = l;
    ++load[static_cast<std::size_t>(l)];
  }

  std::vector<int> phase(static_cast<std::size_t>(M));
  for (Index m = 0; m < M; ++m) {
    phase[static_cast<std::size_t>(m)] = quantize_phase(channel(m, chain[static_cast<std::size_t>(m)]), bits);
  }
  return RfPrecoder::from_assignment(L, std::move(chain), std::move(phase), bits);
}

ComplexMatrix frps_statistical_rf(const Grouping& grouping, int bits) {
  const Index M = grouping.antenna_count();
  ComplexMatrix rf = ComplexMatrix::Zero(M, grouping.user_count());
  for (int g = 0; g < grouping.group_count(); ++g) {
    const ComplexMatrix u =
        dominant_subspace(grouping.group_correlations[static_cast<std::size_t>(g)], grouping.size(g));
    const auto& chains = grouping.rf_chains[static_cast<std::size_t>(g)];
    for (std::size_t i = 0; i < chains.size(); ++i) {
      for (Index m = 0; m < M; ++m) {
        rf(m, chains[i]) = quantized_entry(quantize_phase(u(m, static_cast<Index>(i)), bits), bits, M);
      }
    }
  }
  return rf;
}

LongTermDesign design_long_term(SchemeId scheme, const Grouping& grouping,
                                const DesignOptions& options) {
  LongTermDesign design;
  design.scheme = scheme;
  design.grouping = grouping;
  if (scheme == SchemeId::kMphp) {
    MphpRfDesign mphp = design_mphp_rf(grouping, options.bits, options.total_power, options.relaxed);
    design.rf = mphp.rf.matrix();
    design.relaxed = std::move(mphp.relaxed);
    design.structured = std::move(mphp.rf);
  } else if (scheme == SchemeId::kFrpsStatistical) {
    design.rf = frps_statistical_rf(grouping, options.bits);
  }
  return design;
}

SlotPrecoding build_slot_precoding(const LongTermDesign& design, const ComplexMatrix& channel,
                                   const DesignOptions& options) {
  const Index M = channel.rows();
  const int K = static_cast<int>(channel.cols());
  switch (design.scheme) {
    case SchemeId::kMphp: {
      const Grouping& grouping = design.grouping;
      if (grouping.user_count() != K) {
        throw Error(ErrorKind::kInvalidInput, "build_slot_precoding: grouping/channel user count mismatch");
      }
      SlotPrecoding slot;
      for (int g = 0; g < grouping.group_count(); ++g) {
        const auto& users = grouping.members[static_cast<std::size_t>(g)];
        ComplexMatrix h_g(M, static_cast<Index>(users.size()));
        for (std::size_t i = 0; i < users.size(); ++i) h_g.col(static_cast<Index>(i)) = channel.col(users[i]);
        const ComplexMatrix f_g = design.structured->group_block(grouping, g);
        try {
          const ComplexMatrix w_g = zf_precoder(effective_channel(h_g, f_g));
          slot.groups.push_back(precode_group(users, f_g, w_g, options.total_power, K));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kNearSingular) throw;
          slot.groups.push_back(silent_group(users, M));
        }
      }
      return slot;
    }
    case SchemeId::kFullDigitalZf:
      return single_group_zf(channel, ComplexMatrix::Identity(M, M), options);
    case SchemeId::kFrpsStatistical:
      return single_group_zf(channel, design.rf, options);
    case SchemeId::kFixedSubarray:
      return single_group_zf(channel, fixed_subarray_rf(channel, options.bits).matrix(), options);
    case SchemeId::kAdaptiveInstant:
      return single_group_zf(channel, adaptive_instant_rf(channel, options.bits).matrix(), options);
  }
  throw Error(ErrorKind::kInvalidInput, "build_slot_precoding: unknown scheme");
}

}  // namespace mphp
