#include "mphp/grouping.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace mphp {
namespace {

ComplexMatrix projector(const HermitianMatrix& r, Index rank) {
  const ComplexMatrix u = dominant_subspace(r, rank);
  return u * u.adjoint();
}

double projector_distance(const ComplexMatrix& pa, const ComplexMatrix& pb) {
  return (pa - pb).norm();
}

HermitianMatrix average(const CorrelationSet& correlations, const std::vector<int>& users) {
  HermitianMatrix acc = HermitianMatrix::zero(correlations.per_user.front().dim());
  for (const int k : users) acc += correlations.per_user[static_cast<std::size_t>(k)];
  acc *= 1.0 / static_cast<double>(users.size());
  return acc;
}

std::vector<std::vector<int>> members_of(const std::vector<int>& assignment, int group_count) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(group_count));
  for (int k = 0; k < static_cast<int>(assignment.size()); ++k) {
    members[static_cast<std::size_t>(assignment[static_cast<std::size_t>(k)])].push_back(k);
  }
  return members;
}

}  // namespace

std::vector<int> Grouping::group_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(members.size());
  for (const auto& m : members) sizes.push_back(static_cast<int>(m.size()));
  return sizes;
}

double chordal_distance(const HermitianMatrix& ra, const HermitianMatrix& rb, Index r) {
  if (ra.dim() != rb.dim()) {
    throw Error(ErrorKind::kInvalidInput, "chordal_distance: dimension mismatch");
  }
  return projector_distance(projector(ra, r), projector(rb, r));
}

Grouping make_grouping(const CorrelationSet& correlations, std::vector<int> assignment) {
  const int K = static_cast<int>(correlations.per_user.size());
  if (K == 0 || static_cast<int>(assignment.size()) != K) {
    throw Error(ErrorKind::kInvalidInput, "make_grouping: assignment size must equal user count");
  }
  const int G = *std::max_element(assignment.begin(), assignment.end()) + 1;
  if (*std::min_element(assignment.begin(), assignment.end()) < 0) {
    throw Error(ErrorKind::kInvalidInput, "make_grouping: negative group label");
  }

  // Relabel by first appearance so group order follows user order.
  std::vector<int> relabel(static_cast<std::size_t>(G), -1);
  int next = 0;
  for (const int g : assignment) {
    auto& slot = relabel[static_cast<std::size_t>(g)];
    if (slot < 0) slot = next++;
  }
  if (next != G) throw Error(ErrorKind::kInvalidInput, "make_grouping: empty group");
  for (int& g : assignment) g = relabel[static_cast<std::size_t>(g)];

  Grouping out;
  out.assignment = std::move(assignment);
  out.members = members_of(out.assignment, G);
  int chain = 0;
  for (const auto& m : out.members) {
    std::vector<int> chains(m.size());
    std::iota(chains.begin(), chains.end(), chain);
    chain += static_cast<int>(m.size());
    out.rf_chains.push_back(std::move(chains));
    out.group_correlations.push_back(average(correlations, m));
  }
  return out;
}

Grouping group_users(const CorrelationSet& correlations, int group_count, Index subspace_rank,
                     int max_iterations) {
  const auto& R = correlations.per_user;
  const int K = static_cast<int>(R.size());
  if (K == 0) throw Error(ErrorKind::kInvalidInput, "group_users: no users");
  if (group_count < 1 || group_count > K) {
    throw Error(ErrorKind::kInvalidInput, "group_users: G = " + std::to_string(group_count) +
                                              " must satisfy 1 <= G <= K = " + std::to_string(K));
  }
  const Index M = R.front().dim();
  if (subspace_rank < 1 || subspace_rank > M) {
    throw Error(ErrorKind::kInvalidInput, "group_users: subspace rank must satisfy 1 <= r <= M");
  }
  const int G = group_count;

  std::vector<ComplexMatrix> user_proj;
  user_proj.reserve(static_cast<std::size_t>(K));
  for (const auto& rk : R) user_proj.push_back(projector(rk, subspace_rank));

  // Farthest-point seeding starting from user 0; ties go to the lowest index.
  std::vector<ComplexMatrix> centroids{user_proj[0]};
  std::vector<bool> chosen(static_cast<std::size_t>(K), false);
  chosen[0] = true;
  while (static_cast<int>(centroids.size()) < G) {
    int best = -1;
    double best_dist = -1.0;
    for (int k = 0; k < K; ++k) {
      if (chosen[static_cast<std::size_t>(k)]) continue;
      double d = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) d = std::min(d, projector_distance(user_proj[static_cast<std::size_t>(k)], c));
      if (d > best_dist) {
        best_dist = d;
        best = k;
      }
    }
    chosen[static_cast<std::size_t>(best)] = true;
    centroids.push_back(user_proj[static_cast<std::size_t>(best)]);
  }

  auto distance_to = [&](int k, int g) {
    return projector_distance(user_proj[static_cast<std::size_t>(k)], centroids[static_cast<std::size_t>(g)]);
  };
  auto objective = [&](const std::vector<int>& assign) {
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += distance_to(k, assign[static_cast<std::size_t>(k)]);
    return total;
  };

  std::vector<int> assignment(static_cast<std::size_t>(K), -1);
  std::vector<double> history;
  int iterations = 0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    std::vector<int> next(static_cast<std::size_t>(K), 0);
    for (int k = 0; k < K; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (int g = 0; g < G; ++g) {
        const double d = distance_to(k, g);
        if (d < best) {
          best = d;
          next[static_cast<std::size_t>(k)] = g;
        }
      }
    }

    // Empty-cluster repair: move the user farthest from its centroid, taken
    // from a cluster that can spare one.
    std::vector<int> sizes(static_cast<std::size_t>(G), 0);
    for (const int g : next) ++sizes[static_cast<std::size_t>(g)];
    for (int g = 0; g < G; ++g) {
      if (sizes[static_cast<std::size_t>(g)] > 0) continue;
      int donor = -1;
      double far = -1.0;
      for (int k = 0; k < K; ++k) {
        const int gk = next[static_cast<std::size_t>(k)];
        if (sizes[static_cast<std::size_t>(gk)] < 2) continue;
        const double d = distance_to(k, gk);
        if (d > far) {
          far = d;
          donor = k;
        }
      }
      --sizes[static_cast<std::size_t>(next[static_cast<std::size_t>(donor)])];
      next[static_cast<std::size_t>(donor)] = g;
      ++sizes[static_cast<std::size_t>(g)];
    }

    const double before_update = objective(next);
    if (!history.empty() && before_update > history.back()) {
      // Centroids are not exact chordal means, so a step can in principle
      // worsen the objective; keep the previous partition in that case.
      break;
    }
    const bool unchanged = next == assignment;
    assignment = std::move(next);
    ++iterations;

    std::vector<ComplexMatrix> updated;
    updated.reserve(static_cast<std::size_t>(G));
    const auto members = members_of(assignment, G);
    for (int g = 0; g < G; ++g) {
      updated.push_back(projector(average(correlations, members[static_cast<std::size_t>(g)]), subspace_rank));
    }
    const std::vector<ComplexMatrix> previous = std::exchange(centroids, std::move(updated));
    const double after_update = objective(assignment);
    if (after_update > before_update) {
      centroids = previous;
      history.push_back(before_update);
      break;
    }
    history.push_back(after_update);
    if (unchanged) break;
  }

  Grouping out = make_grouping(correlations, assignment);
  out.objective_history = std::move(history);
  out.iterations = iterations;
  return out;
}

}  // namespace mphp
