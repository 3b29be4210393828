#pragma once

#include "mde/measures.hpp"
#include "mde/rng.hpp"

namespace mde {

/// Shape of the random atomic measures drawn by certification sweeps.
struct MeasureSampler {
  int dim = 1;
  int min_atoms = 1;
  int max_atoms = 8;
  double box = 1.0;          // locations uniform in [-box, box]^dim
  double min_weight = 0.01;  // weights uniform in [min_weight, max_weight]
  double max_weight = 1.0;
  bool probability = false;  // rescale to total mass 1
};

/// Draws, in order: atom count, then per atom its coordinates followed by
/// its weight. Everything comes from `rng`, so a seed fixes the sample.
DiscreteMeasure sample_measure(CounterRng& rng, const MeasureSampler& shape);

}  // namespace mde
