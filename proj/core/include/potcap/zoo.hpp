#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "potcap/channels.hpp"

namespace potcap {

/// Declarative description of a channel. The text form is `kind(arg, ...)`,
/// e.g. `dephasing(0.1)`, `depolarizing(0.5, 3)`, `random(2, 2, 3, 7)`,
/// `measure_prepare(x)` or `custom(path/to/channel.json)`.
struct ChannelSpec {
  std::string kind;
  std::vector<double> params;
  std::string text_arg;  // basis name or file path

  std::string to_string() const;
  static ChannelSpec parse(const std::string& text);
};

/// Kinds understood by `zoo`.
const std::vector<std::string>& zoo_kinds();

/// Builds and validates the channel; throws ConfigError on bad parameters.
KrausChannel zoo(const ChannelSpec& spec);
KrausChannel zoo(const std::string& text);

// Direct constructors.
KrausChannel identity_channel(int d = 2);
KrausChannel dephasing_channel(double p);
KrausChannel depolarizing_channel(double p, int d = 2);
KrausChannel amplitude_damping_channel(double gamma);
KrausChannel erasure_channel(double p, int d = 2);
KrausChannel full_dephasing_channel(int d = 2);
/// Measures in the named basis (z, x, y or fourier) and prepares |b>.
KrausChannel measure_prepare_channel(const std::string& basis, int d = 2);
KrausChannel random_channel(int d_in, int d_out, int k, std::uint64_t seed);
/// rho -> |0><0| on C^d_out.
KrausChannel constant_channel(int d_in = 2, int d_out = 2);
/// C^d -> C (discards the input).
KrausChannel trace_channel(int d);
/// C -> C^d, prepares the maximally mixed state.
KrausChannel prepare_mixed_channel(int d);

}  // namespace potcap
