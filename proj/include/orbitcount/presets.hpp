#pragma once

// Built-in scenarios.

#include "asympt.hpp"

namespace orbitcount {

struct Preset {
  std::string name;
  std::string description;
  ScenarioSpec scenario;
  long long class_number = 1;  // asserted, used only for the predicted constant
};

inline OrderSpec lipschitz_order() { return make_order("lipschitz", quaternion_algebra(-1, -1), 0); }
inline OrderSpec hurwitz_order() { return make_order("hurwitz", hurwitz_algebra(), 0); }
inline OrderSpec gauss_order() { return make_order("gauss", quadratic_algebra(-1), 0); }
inline OrderSpec zsqrt2_order() { return make_order("zsqrt2", quadratic_algebra(2), 1); }

inline std::vector<std::string> preset_names() { return {"zsqrt2", "gauss", "model-quadric", "lipschitz", "hurwitz"}; }

inline Preset make_preset(const std::string& name, const Rational& k_max = 100) {
  Preset p;
  p.name = name;
  p.scenario.k_max = k_max;
  if (name == "zsqrt2") {
    p.description = "norm form a^2 - 2b^2 on Z[sqrt 2]";
    p.scenario.family = Family::normform;
    p.scenario.payload = zsqrt2_order();
  } else if (name == "gauss") {
    p.description = "norm form a^2 + b^2 on Z[i]";
    p.scenario.family = Family::normform;
    p.scenario.payload = gauss_order();
  } else if (name == "model-quadric") {
    p.description = "q = xz - y^2 on the hyperplanes x + z = k";
    p.scenario.family = Family::quadric;
    p.scenario.payload = model_section();
  } else if (name == "lipschitz") {
    p.description = "reduced norm on the Lipschitz order Z<1,i,j,k>";
    p.scenario.family = Family::algebra_norm;
    p.scenario.payload = lipschitz_order();
  } else if (name == "hurwitz") {
    p.description = "reduced norm on the Hurwitz order";
    p.scenario.family = Family::algebra_norm;
    p.scenario.payload = hurwitz_order();
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
  return p;
}

}  // namespace orbitcount
