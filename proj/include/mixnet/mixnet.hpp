#pragma once

#include "mixnet/anonymity.hpp"
#include "mixnet/attacks.hpp"
#include "mixnet/edge_list.hpp"
#include "mixnet/error.hpp"
#include "mixnet/generators.hpp"
#include "mixnet/graph.hpp"
#include "mixnet/markov.hpp"
#include "mixnet/random.hpp"
#include "mixnet/report.hpp"
#include "mixnet/spectral.hpp"

namespace mixnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mixnet
