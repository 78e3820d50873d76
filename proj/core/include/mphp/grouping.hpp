#pragma once

#include <vector>

#include "mphp/channel.hpp"
#include "mphp/numerics.hpp"

namespace mphp {

/// Partition of the K users into G groups, with the RF chains of each group
/// laid out contiguously in group order (group 0 owns chains 0..S_0-1, ...).
struct Grouping {
  std::vector<int> assignment;                 // user -> group
  std::vector<std::vector<int>> members;       // group -> users, ascending
  std::vector<std::vector<int>> rf_chains;     // group -> chain indices
  std::vector<HermitianMatrix> group_correlations;  // R_g
  std::vector<double> objective_history;       // within-group chordal distance per iteration
  int iterations = 0;

  int group_count() const { return static_cast<int>(members.size()); }
  int user_count() const { return static_cast<int>(assignment.size()); }
  int size(int g) const { return static_cast<int>(members[static_cast<std::size_t>(g)].size()); }
  std::vector<int> group_sizes() const;
  Index antenna_count() const { return group_correlations.front().dim(); }
};

/// ceil(M / 8).
constexpr Index default_subspace_rank(Index antenna_count) { return (antenna_count + 7) / 8; }

/// ||U_a U_a^H - U_b U_b^H||_F over the r dominant eigenvectors.
double chordal_distance(const HermitianMatrix& ra, const HermitianMatrix& rb, Index r);

/// Builds a Grouping from an explicit partition. Groups are relabelled in
/// order of their smallest user and members sorted, then chains and R_g are
/// derived. Throws kInvalidInput if the partition is not valid.
Grouping make_grouping(const CorrelationSet& correlations, std::vector<int> assignment);

/// Lloyd-style clustering of users by chordal distance between dominant
/// r-dimensional correlation subspaces.
Grouping group_users(const CorrelationSet& correlations, int group_count, Index subspace_rank,
                     int max_iterations = 50);

}  // namespace mphp
