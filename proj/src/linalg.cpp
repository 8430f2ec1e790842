#include "immersion/linalg.hpp"

#include <string>

namespace immersion {

Matrix signature_gram_schmidt(const Matrix& frame, const Matrix& gram, const std::vector<int>& signs) {
  Matrix out = frame;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    Vector v = out.col(c);
    for (Eigen::Index p = 0; p < c; ++p) {
      const Vector& q = out.col(p);
      const double self = static_cast<double>(signs[static_cast<std::size_t>(p)]);
      v -= (q.dot(gram * v) / self) * q;
    }
    const double norm2 = v.dot(gram * v);
    const double expected = static_cast<double>(signs[static_cast<std::size_t>(c)]);
    if (!(norm2 * expected > 0.0)) {
      throw Error("Gram-Schmidt: column " + std::to_string(c) + " has the wrong causal character");
    }
    out.col(c) = v / std::sqrt(norm2 * expected);
  }
  return out;
}

}  // namespace immersion
