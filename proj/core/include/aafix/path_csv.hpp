#pragma once

#include "aafix/function_space.hpp"

#include <iosfwd>
#include <string>

namespace aafix {

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);
double parse_double(std::string_view text);

/// CSV with header `t,v1,...,vd`, one row per grid node.
void write_path_csv(std::ostream& out, const SampledPath& p);
void write_path_csv(const std::string& file, const SampledPath& p);

SampledPath read_path_csv(std::istream& in, DomainKind domain = DomainKind::full_line,
                          Interpolation interp = Interpolation::cubic,
                          TailPolicy tail = TailPolicy::error());
SampledPath read_path_csv(const std::string& file, DomainKind domain = DomainKind::full_line,
                          Interpolation interp = Interpolation::cubic,
                          TailPolicy tail = TailPolicy::error());

}  // namespace aafix
