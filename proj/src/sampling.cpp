#include "mde/sampling.hpp"

#include "mde/errors.hpp"

namespace mde {

DiscreteMeasure sample_measure(CounterRng& rng, const MeasureSampler& shape) {
  if (shape.min_atoms < 1 || shape.max_atoms < shape.min_atoms)
    throw Error("sampler atom range is empty");
  const int count = rng.integer(shape.min_atoms, shape.max_atoms);
  std::vector<Atom> atoms(count);
  double mass = 0.0;
  for (auto& a : atoms) {
    a.location.resize(shape.dim);
    for (auto& c : a.location) c = rng.uniform(-shape.box, shape.box);
    a.weight = rng.uniform(shape.min_weight, shape.max_weight);
    mass += a.weight;
  }
  if (shape.probability)
    for (auto& a : atoms) a.weight /= mass;
  return DiscreteMeasure(shape.dim, std::move(atoms));
}

}  // namespace mde
