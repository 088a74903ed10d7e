#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "potcap/channels.hpp"
#include "potcap/linops.hpp"

namespace potcap {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {rows, cols, real[][], imag[][]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
RealVector real_vector_from_json(const Json& j);

/// {name, d_in, d_out, kraus: [matrix...]}
Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);
KrausChannel read_channel_file(const std::string& path);

}  // namespace potcap
