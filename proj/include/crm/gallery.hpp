#pragma once

#include <string>
#include <vector>

#include "crm/manifold_maps.hpp"

// Named fixture maps used by the CLI and by the regression tests. Each
// entry carries the classification expected of it on its default grid.

namespace crm {

struct GalleryEntry {
  std::string name;
  std::string description;
  ChartManifold domain_chart;
  ChartManifold codomain_chart;
  SmoothMapSpec spec;
  std::vector<GridAxis> default_grid;

  struct Expected {
    bool geometric_everywhere = false;
    int constant_rank = -1;      // -1: rank is not constant on the grid
    double factor = 0.0;         // 0: no single expected canonical factor
    bool rank_drops = false;
  } expected;
};

const std::vector<GalleryEntry>& gallery();

/// Throws std::invalid_argument for an unknown name.
const GalleryEntry& gallery_entry(const std::string& name);

}  // namespace crm
