#pragma once

namespace kmcg {

// Search budgets shared across the configuration pipeline.  Exhausting a cap
// raises ExhaustedError; it never degrades into a silent verdict.
struct Caps {
  int orbit_cap = 12;   // word length for real-root enumeration
  int bfs_radius = 12;  // Cayley-ball radius for quadrant witnesses
  int power_cap = 32;   // powers evaluated for end-containment verdicts
  int periods = 3;      // translation periods scanned for crossed walls
};

}  // namespace kmcg
