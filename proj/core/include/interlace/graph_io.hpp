#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "interlace/graph.hpp"

namespace interlace {

// Plain-text graph document:
//
//   vertices N
//   edge i j w        (0 <= i, j < N, i != j, w > 0)
//   boundary i [p]    (return probability p in [0, 1); absent means Kill)
//
// Blank lines and '#' comments are ignored; any other directive is an error.
Window load_graph(std::string_view text);
Window load_graph_file(const std::filesystem::path& path);

// Inverse of load_graph, weights written with round-trip precision.
std::string format_graph(const Window& window);

}  // namespace interlace
