#include "ftamp/scene.hpp"

#include <numbers>

namespace ftamp {

std::vector<SerialArm> default_arms(bool second_arm) {
  std::vector<SerialArm> arms;
  arms.push_back(default_arm("r1", Transform::identity()));
  if (second_arm) {
    arms.push_back(default_arm("r2", Transform::from_xyz_rpy(Vec3(1.0, 0.0, 0.0), Vec3(0.0, 0.0, std::numbers::pi))));
  }
  return arms;
}

BottleScene default_bottle_scene() {
  BottleScene s;
  s.arms = default_arms(true);
  s.mat = Surface{"mat", Vec3(0.45, 0.25, 0.0), 0.1, 0.1, 0.005, 0.8};
  s.vise = BottleScene::Vise{};
  s.tool = BottleScene::Tool{};
  return s;
}

NutScene default_nut_scene() {
  NutScene s;
  s.arms = default_arms(true);
  s.spanner = NutScene::Spanner{};
  s.weights = {
      {"weight-light", 0.5, 0.03, 0.04, Vec3(0.25, 0.3, 0.0)},
      {"weight-medium", 2.0, 0.04, 0.06, Vec3(0.35, 0.35, 0.0)},
      {"weight-heavy", 5.0, 0.05, 0.09, Vec3(0.45, 0.35, 0.0)},
  };
  return s;
}

}  // namespace ftamp
