#include "estimators.hpp"

#include <cmath>
#include <string>

namespace chanest {

const char* method_name(Method m) {
  switch (m) {
    case Method::Ls: return "ls";
    case Method::Mmse: return "mmse";
    case Method::Pso: return "pso";
    case Method::Hybrid: return "hybrid";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "ls") return Method::Ls;
  if (name == "mmse") return Method::Mmse;
  if (name == "pso") return Method::Pso;
  if (name == "hybrid") return Method::Hybrid;
  throw ConfigError("methods: unknown method '" + std::string(name) +
                    "' (expected ls, mmse, pso or hybrid)");
}

Estimate estimate_ls(const CMatrix& y, const CMatrix& s) {
  const CMatrix sh = hermitian(s);
  const CMatrix gram = matmul(s, sh);
  return Estimate{matmul(matmul(y, sh), inverse(gram)), Method::Ls};
}

Estimate estimate_mmse(const CMatrix& y, const CMatrix& s, double noise_var) {
  if (noise_var < 0.0) {
    throw ConfigError("noise_var: must be non-negative");
  }
  const Estimate ls = estimate_ls(y, s);
  const int k = s.rows();
  const double tau = static_cast<double>(s.cols());
  // Weight matrix R * (R + (noise_var / tau) * I)^-1 with prior R = I.
  CMatrix prior = CMatrix::identity(k);
  CMatrix regularized = prior;
  for (int i = 0; i < k; ++i) regularized(i, i) += Complex{noise_var / tau, 0.0};
  const CMatrix weight = matmul(prior, inverse(regularized));
  return Estimate{matmul(ls.h_hat, weight), Method::Mmse};
}

double nmse(const CMatrix& h_true, const CMatrix& h_hat) {
  if (h_true.rows() != h_hat.rows() || h_true.cols() != h_hat.cols()) {
    throw ShapeError("nmse: estimate is " + std::to_string(h_hat.rows()) + "x" +
                     std::to_string(h_hat.cols()) + ", reference is " +
                     std::to_string(h_true.rows()) + "x" +
                     std::to_string(h_true.cols()));
  }
  const double ref = frob_norm_sq(h_true);
  if (ref == 0.0) {
    throw DegenerateInputError("nmse: reference channel has zero norm");
  }
  return frob_norm_sq(h_true - h_hat) / ref;
}

double fitness(const CMatrix& h_true, const CMatrix& candidate, double floor) {
  if (h_true.rows() != candidate.rows() || h_true.cols() != candidate.cols()) {
    throw ShapeError("fitness: candidate is " + std::to_string(candidate.rows()) +
                     "x" + std::to_string(candidate.cols()) + ", reference is " +
                     std::to_string(h_true.rows()) + "x" +
                     std::to_string(h_true.cols()));
  }
  if (!(floor > 0.0)) {
    throw ConfigError("fitness_floor: must be positive");
  }
  const double floor_sq = floor * floor;
  double acc = 0.0;
  for (int i = 0; i < h_true.rows(); ++i) {
    for (int j = 0; j < h_true.cols(); ++j) {
      const double err = std::norm(h_true(i, j) - candidate(i, j));
      const double ref = std::max(std::norm(h_true(i, j)), floor_sq);
      acc += err / ref;
    }
  }
  return acc / (static_cast<double>(h_true.rows()) * h_true.cols());
}

}  // namespace chanest
