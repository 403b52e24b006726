#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "resonator/schottky.hpp"

namespace resonator {

// Finite group as a dense multiplication table. Immutable after construction;
// desk-scale by design (the table cap bounds |G|).
struct FiniteGroupModel {
  int order = 1;
  int identity = 0;
  std::vector<int> inverse;  // size order
  std::vector<int> table;    // row-major order x order
  std::string label;

  int mul(int g, int h) const { return table[static_cast<std::size_t>(g) * order + h]; }
  int inv(int g) const { return inverse[g]; }
  bool is_abelian() const;
  // Index of an element of maximal order n with <g> = G, or -1.
  int cyclic_generator() const;
};

using GroupPtr = std::shared_ptr<const FiniteGroupModel>;

inline constexpr std::uint64_t kClosureCap = 200000;
inline constexpr int kTableCap = 4096;

GroupPtr build_cyclic(int n);
GroupPtr build_dihedral(int n);  // order 2n
// Validates the group axioms (full check for order <= 64, sampled above).
GroupPtr build_from_table(int order, std::vector<int> table, std::string label = "table");

struct IntMat2 {
  long long a = 1, b = 0, c = 0, d = 1;
};

// Closure of the generator images in SL2(Z/qZ) by breadth-first
// multiplication. Throws TooLarge past the closure cap or the table cap.
struct CongruenceGroup {
  GroupPtr group;
  std::vector<int> generatorImages;  // image of each input generator
};
CongruenceGroup build_sl2_mod_q(const std::vector<IntMat2>& generators, int q);

// Homomorphism from the Schottky free group determined by the images of the
// m free generators; images of the inverses are filled in.
struct GroupHom {
  GroupPtr group;
  std::vector<int> images;  // size 2m, images[j+m] = images[j]^{-1}

  int m() const { return static_cast<int>(images.size()) / 2; }
  int image_of_letter(int letter) const { return images[letter]; }
  int image_of_word(std::span<const int> letters) const;
  // Subgroup generated by the images (sorted element indices).
  std::vector<int> generated_subgroup() const;
  bool generates() const;
};

GroupHom make_hom(GroupPtr group, const std::vector<int>& generatorImages);

// Congruence reduction of Schottky generators with integer matrices.
GroupHom congruence_hom(const SchottkyData& s, int q);

// Spectrum of the averaging operator T f(x) = (1/2m) sum_j f(x g_j^{+-1}) on
// mean-zero functions, and the two-sided expansion constant
// eps = 1 - max |lambda|. Returns eps = 0 when the images fail to generate.
struct ExpansionReport {
  double epsilon = 0.0;
  std::vector<double> nontrivialSpectrum;  // sorted descending by value
};
ExpansionReport expansion_report(const GroupHom& h);
double expansion_epsilon(const GroupHom& h);

}  // namespace resonator
