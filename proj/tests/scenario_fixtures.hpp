#pragma once

// Shared experiment setups for the test suites. Two entries differ from the
// originally reported captions: the table1a obstacle center is (4, 8) and
// the table1c obstacle radius is 4 — the values every reported segment
// table actually satisfies (the captions do not reproduce the solutions).

#include "cspath/model.hpp"

namespace fixtures {

inline cspath::ScenarioConfig table1a() {
  return {cspath::Pose{0, 0, 3 * cspath::kPi / 2}, 6.0, 1.0, cspath::Pose{20, 12, cspath::kPi},
          1.0,
          {cspath::ObstacleSpec{4, 8, 2}}};
}

inline cspath::ScenarioConfig table1b() {
  return {cspath::Pose{0, 0, 7 * cspath::kPi / 6}, 6.0, 0.5, cspath::Pose{30, 15, cspath::kPi},
          2.0,
          {cspath::ObstacleSpec{6, 8, 5}}};
}

inline cspath::ScenarioConfig table1c() {
  return {cspath::Pose{0, 0, 7 * cspath::kPi / 6}, 6.0, 1.0,
          cspath::Pose{6, 8, cspath::kPi / 4},      3.0,
          {cspath::ObstacleSpec{6, 8, 4}}};
}

inline cspath::ScenarioConfig table4a() {
  return {cspath::Pose{0, 0, cspath::kPi}, 7.0, 1.0, cspath::Pose{0, 25, 0}, 5.0,
          {cspath::ObstacleSpec{6, 8, 4}, cspath::ObstacleSpec{15, 15, 4}}};
}

inline cspath::ScenarioConfig table4b() {
  return {cspath::Pose{0, 0, 7 * cspath::kPi / 6}, 6.0, 1.0,
          cspath::Pose{25, 5, cspath::kPi / 2},     3.0,
          {cspath::ObstacleSpec{6, 8, 5}, cspath::ObstacleSpec{15, 20, 4}}};
}

inline cspath::ScenarioConfig table4c() {
  return {cspath::Pose{0, 0, cspath::kPi},           7.0, 1.0,
          cspath::Pose{25, 25, 3 * cspath::kPi / 2}, 2.0,
          {cspath::ObstacleSpec{6, 8, 4}, cspath::ObstacleSpec{15, 15, 4}}};
}

inline cspath::ScenarioConfig table4d() {
  return {cspath::Pose{0, 0, 5 * cspath::kPi / 6},   7.0, 1.0,
          cspath::Pose{35, 5, 4 * cspath::kPi / 6}, 2.0,
          {cspath::ObstacleSpec{6, 8, 4}, cspath::ObstacleSpec{15, 15, 4}}};
}

inline cspath::ScenarioConfig realworld() {
  // planar coordinates as reported; the JSON fixture carries the raw
  // geographic coordinates instead and projects them on load
  return {cspath::Pose{9133.10, 2528.32, 5 * cspath::kPi / 6}, 800.0, 10.0,
          cspath::Pose{9351.30, 2560.40, 4 * cspath::kPi / 6}, 400.0,
          {cspath::ObstacleSpec{9147.19, 2579.23, 20}, cspath::ObstacleSpec{9216.63, 2629.00, 20}}};
}

}  // namespace fixtures
