#include "mphp/baseband.hpp"

#include <string>

namespace mphp {

ComplexMatrix effective_channel(const ComplexMatrix& group_channel, const ComplexMatrix& group_rf) {
  if (group_channel.rows() != group_rf.rows()) {
    throw Error(ErrorKind::kInvalidInput, "effective_channel: antenna dimensions differ");
  }
  return group_channel.adjoint() * group_rf;
}

ComplexMatrix zf_precoder(const ComplexMatrix& effective) {
  if (effective.rows() < 1 || effective.rows() > effective.cols()) {
    throw Error(ErrorKind::kInvalidInput, "zf_precoder: need 1 <= rows <= cols");
  }
  const ComplexMatrix gram = effective * effective.adjoint();
  ComplexMatrix w = effective.adjoint() * solve_right_inverse(gram);
  for (Index k = 0; k < w.cols(); ++k) {
    const double n = w.col(k).norm();
    if (!(n > 0.0)) throw Error(ErrorKind::kNearSingular, "zf_precoder: zero precoding column");
    w.col(k) /= n;
  }
  return w;
}

std::vector<double> power_allocation(const ComplexMatrix& group_rf, const ComplexMatrix& baseband,
                                     double total_power, int user_count) {
  if (group_rf.cols() != baseband.rows()) {
    throw Error(ErrorKind::kInvalidInput, "power_allocation: F and W do not conform");
  }
  const ComplexMatrix beams = group_rf * baseband;
  std::vector<double> p(static_cast<std::size_t>(beams.cols()));
  for (Index k = 0; k < beams.cols(); ++k) {
    const double gain = beams.col(k).squaredNorm();
    if (!(gain > 0.0)) {
      throw Error(ErrorKind::kDegenerateBeam,
                  "power_allocation: ||F_g w_k|| = 0 for column " + std::to_string(k));
    }
    p[static_cast<std::size_t>(k)] = total_power / (user_count * gain);
  }
  return p;
}

}  // namespace mphp
