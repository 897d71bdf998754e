#pragma once

#include <string_view>

#include "cmatrix.hpp"

namespace chanest {

enum class Method { Ls, Mmse, Pso, Hybrid };

/// Lowercase tag used in CSV output and CLI flags: ls, mmse, pso, hybrid.
const char* method_name(Method m);

/// Parses a lowercase method tag; throws ConfigError on anything else.
Method parse_method(std::string_view name);

struct Estimate {
  CMatrix h_hat;
  Method method;
};

/// Least-squares estimate H_LS = Y * S^H * (S * S^H)^-1.
Estimate estimate_ls(const CMatrix& y, const CMatrix& s);

/// Linear MMSE estimate for this data model (unit-variance channel prior,
/// known noise variance): H_LS * R * (R + (noise_var / tau) * I)^-1 with
/// R = I, which collapses to the per-element shrinkage
/// tau / (tau + noise_var) of the LS estimate. Computed through the matrix
/// form so the shrinkage identity stays a checkable property.
Estimate estimate_mmse(const CMatrix& y, const CMatrix& s, double noise_var);

/// Normalized squared error |H - H_hat|_F^2 / |H|_F^2. Throws
/// DegenerateInputError when the reference norm is zero.
double nmse(const CMatrix& h_true, const CMatrix& h_hat);

/// Element-wise normalized squared error averaged over all entries:
/// mean_ij |H_ij - C_ij|^2 / max(|H_ij|^2, floor^2). The floor keeps the
/// value finite near zero-magnitude channel entries. Zero exactly when the
/// candidate matches the reference on every entry with |H_ij| > floor.
double fitness(const CMatrix& h_true, const CMatrix& candidate, double floor);

}  // namespace chanest
