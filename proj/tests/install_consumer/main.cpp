#include <cmath>

#include "interlace/builders.hpp"
#include "interlace/potential.hpp"

int main() {
  const interlace::Window w = interlace::build_regular_tree(3, 5, 1.0 / 3);
  const double cap = interlace::capacity(w, interlace::VertexSet(w.size(), {0}));
  return std::abs(cap - 0.5) < 1e-9 ? 0 : 1;
}
