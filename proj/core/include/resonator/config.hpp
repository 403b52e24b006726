#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resonator/groups.hpp"
#include "resonator/schottky.hpp"
#include "resonator/zeta.hpp"

namespace resonator {

// Group specification as it appears in config files.
struct GroupSpec {
  enum class Kind { Cyclic, Dihedral, Congruence, Table };
  Kind kind = Kind::Cyclic;
  int n = 1;                       // cyclic/dihedral order parameter
  int q = 2;                       // congruence level
  int order = 0;                   // table order
  std::vector<int> table;          // row-major, Table only
  std::vector<int> generatorImages;  // images of the m free generators (optional)

  std::string label() const;
};

// Representation selector for scans and zeta evaluation.
struct RepSelector {
  enum class Kind { Trivial, Character, IrrepIndex, Regular, AllNontrivial };
  Kind kind = Kind::Trivial;
  std::vector<double> theta;  // Character
  int index = 0;              // IrrepIndex

  std::string label() const;
};

struct RunConfig {
  std::string command;  // subcommand name
  SurfaceDescription surface;
  std::optional<GroupSpec> group;
  RepSelector rep;
  ScanRectangle rectangle;
  int nodes = 24;
  double tol = 1e-8;
  int workers = 1;
  std::string checkpointPath;
  std::string outDir;
  // zeta-eval point
  Complex point{2.0, 0.0};
  // euler truncation
  int maxWordLength = 12;
  int kMax = 30;

  std::uint64_t hash() const;  // canonical content hash; excludes paths
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_json(const std::string& text);

SurfaceDescription parse_surface_json(const std::string& text);

// Builds the hom described by the group spec over the given surface.
GroupHom resolve_hom(const SchottkyData& s, const GroupSpec& spec);

// 17-significant-digit formatting used for every floating-point number the
// tool prints, so reports round-trip exactly.
std::string format_double(double v);
std::string format_complex(Complex v);

}  // namespace resonator
