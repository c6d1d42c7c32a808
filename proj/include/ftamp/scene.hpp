#pragma once

#include "ftamp/robot.hpp"
#include "ftamp/spatial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ftamp {

inline constexpr double kGravity = 9.81;

/// Horizontal support surface. `height` is the z of its top face.
struct Surface {
  std::string name;
  Vec3 center = Vec3::Zero();
  double half_x = 0.1;
  double half_y = 0.1;
  double height = 0.0;
  double mu = 0.5;
};

struct HandModel {
  double mu = 0.8;                 // hand pads and palm
  double grip_force = 40.0;        // N, parallel-jaw squeeze
  double palm_radius = 0.03;       // m
  double fingertip_radius = 0.01;  // m
  double fingertip_mu = 0.4;
  double fingertip_offset = 0.005;  // m, each tip from the lid axis
  double pad_half_x = 0.01;        // m, jaw pad half extents
  double pad_half_y = 0.02;
};

struct BottleScene {
  std::vector<SerialArm> arms;  // arms[0] twists; arms[1], when present, can fixture
  Surface table{"table", Vec3(0.5, 0.0, 0.0), 0.6, 0.6, 0.0, 0.2};
  double table_mu_disabled = 0.02;
  std::optional<Surface> mat;
  struct Vise {
    Vec3 center = Vec3(0.45, -0.25, 0.0);
    double height = 0.02;  // floor of the jaws
  };
  std::optional<Vise> vise;
  struct Tool {
    Vec3 rest = Vec3(0.3, 0.3, 0.05);  // tip position while stowed, axis vertical
    double length = 0.12;
    double tip_radius = 0.025;
    double tip_mu = 0.9;
  };
  std::optional<Tool> tool;
  struct Bottle {
    Vec3 position = Vec3(0.5, 0.0, 0.0);  // xy; z is taken from the surface
    std::string surface = "table";
    double mass = 0.3;
    double radius = 0.045;
    double height = 0.15;
  } bottle;
  double lid_radius = 0.03;
  double lid_height = 0.02;
  HandModel hand;
};

struct BottleOperation {
  double f_z = 15.0;   // N, nominal downward push
  double t_z = 0.2;    // N*m
  double f_max = 60.0;  // N, largest extra downward force
  double f_step = 10.0;
};

struct Weight {
  std::string name;
  double mass = 1.0;     // kg
  double radius = 0.03;  // m, footprint
  double height = 0.05;
  Vec3 rest = Vec3::Zero();  // base position on the table
};

struct NutScene {
  std::vector<SerialArm> arms;  // arms[0] twists; arms[1], when present, can fixture
  struct Beam {
    Vec3 center = Vec3(0.5, 0.0, 0.0);  // on the table top
    double length = 0.6;
    double width = 0.06;
    double height = 0.04;
    double mass = 0.3;
    double mu = 0.3;  // beam on table
  } beam;
  struct Nut {
    double x = -0.1;  // along the beam from its center
    double radius = 0.015;
    double height = 0.03;  // top above the beam surface
    double grip_force = 150.0;
  } nut;
  struct Spanner {
    Vec3 rest = Vec3(0.35, 0.3, 0.0);
    double handle_length = 0.15;
  };
  std::optional<Spanner> spanner;
  std::vector<Weight> weights;
  double weight_grip_force = 35.0;  // N per jaw
  double weight_pinch_radius = 0.02;
  double weight_com_offset = 0.005;  // m, center of mass from the pinch axis
  double weight_slot = 0.15;         // m, from beam center toward the far end
  HandModel hand;
};

struct NutOperation {
  double t_z = 0.5;  // N*m
};

/// Arms used by the shipped scenarios: primary at the origin facing +x and a
/// second arm opposite it.
std::vector<SerialArm> default_arms(bool second_arm);

BottleScene default_bottle_scene();
NutScene default_nut_scene();

}  // namespace ftamp
