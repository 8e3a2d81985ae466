#pragma once

// The fixed-point operators of each problem variant, sampled on the
// working grid.

#include "aafix/problem.hpp"

namespace aafix {

/// All-zero path on the problem grid.
SampledPath zero_path(const ProblemSpec& spec);

/// Gamma y for the full-line variants.
SampledPath apply_gamma(const ProblemSpec& spec, const SampledPath& y);
/// Pi y for the half-line variant.
SampledPath apply_pi(const ProblemSpec& spec, const SampledPath& y);
/// Mild-solution operator for the evolution, resolvent and delay variants.
SampledPath apply_mild_evolution(const ProblemSpec& spec, const SampledPath& y);
/// Dispatch on the variant.
SampledPath apply_operator(const ProblemSpec& spec, const SampledPath& y);

/// Bu on the problem grid.
SampledPath causal_apply(const ProblemSpec& spec, const SampledPath& u);

/// Image of the zero path: the center of every certified ball.
SampledPath compute_base_point(const ProblemSpec& spec);

/// sup-norm of y - Gamma y over the grid.
double residual(const ProblemSpec& spec, const SampledPath& y);

/// Iterates are evaluated past the window by constant extension.
SampledPath as_iterate(const SampledPath& p);

}  // namespace aafix
