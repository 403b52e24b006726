#include "resonator/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resonator/errors.hpp"

namespace resonator {

using nlohmann::json;

std::string GroupSpec::label() const {
  switch (kind) {
    case Kind::Cyclic:
      return "cyclic(" + std::to_string(n) + ")";
    case Kind::Dihedral:
      return "dihedral(" + std::to_string(n) + ")";
    case Kind::Congruence:
      return "congruence(q=" + std::to_string(q) + ")";
    case Kind::Table:
      return "table(order=" + std::to_string(order) + ")";
  }
  return "?";
}

std::string RepSelector::label() const {
  switch (kind) {
    case Kind::Trivial:
      return "trivial";
    case Kind::Character: {
      std::string out = "character(";
      for (std::size_t i = 0; i < theta.size(); ++i) {
        out += (i ? "," : "") + format_double(theta[i]);
      }
      return out + ")";
    }
    case Kind::IrrepIndex:
      return "irrep(" + std::to_string(index) + ")";
    case Kind::Regular:
      return "regular";
    case Kind::AllNontrivial:
      return "all-nontrivial";
  }
  return "?";
}

namespace {

SurfaceDescription surface_from_json(const json& j) {
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "cylinder") {
      return SurfaceDescription::cylinder(j.at("length").get<double>());
    }
    if (preset == "symmetric-funnel") {
      return SurfaceDescription::symmetric_funnel(
          j.at("m").get<int>(), j.at("separation").get<double>());
    }
    if (preset == "sl2z") {
      return SurfaceDescription::sl2z_example();
    }
    throw ConfigError("unknown surface preset '" + preset + "'");
  }
  if (j.contains("matrices") && j.contains("disks")) {
    std::vector<Mat2> mats;
    for (const auto& row : j.at("matrices")) {
      if (row.size() != 4) throw ConfigError("matrix rows are [a,b,c,d]");
      mats.push_back(Mat2{row[0].get<double>(), row[1].get<double>(),
                          row[2].get<double>(), row[3].get<double>()});
    }
    std::vector<Disk> disks;
    for (const auto& dj : j.at("disks")) {
      disks.push_back(
          Disk{dj.at("center").get<double>(), dj.at("radius").get<double>()});
    }
    return SurfaceDescription::explicit_data(std::move(mats), std::move(disks));
  }
  throw ConfigError("surface needs a preset or matrices+disks");
}

json surface_to_json(const SurfaceDescription& d) {
  json j;
  switch (d.kind) {
    case SurfaceDescription::Kind::Cylinder:
      j["preset"] = "cylinder";
      j["length"] = d.length;
      break;
    case SurfaceDescription::Kind::SymmetricFunnel:
      j["preset"] = "symmetric-funnel";
      j["m"] = d.m;
      j["separation"] = d.separation;
      break;
    case SurfaceDescription::Kind::Sl2zExample:
      j["preset"] = "sl2z";
      break;
    case SurfaceDescription::Kind::Explicit: {
      json mats = json::array();
      for (const auto& g : d.matrices) mats.push_back({g.a, g.b, g.c, g.d});
      json disks = json::array();
      for (const auto& dk : d.disks) {
        disks.push_back({{"center", dk.center}, {"radius", dk.radius}});
      }
      j["matrices"] = mats;
      j["disks"] = disks;
      break;
    }
  }
  return j;
}

GroupSpec group_from_json(const json& j) {
  GroupSpec g;
  const std::string type = j.at("type").get<std::string>();
  if (type == "cyclic") {
    g.kind = GroupSpec::Kind::Cyclic;
    g.n = j.at("n").get<int>();
  } else if (type == "dihedral") {
    g.kind = GroupSpec::Kind::Dihedral;
    g.n = j.at("n").get<int>();
  } else if (type == "congruence") {
    g.kind = GroupSpec::Kind::Congruence;
    g.q = j.at("q").get<int>();
  } else if (type == "table") {
    g.kind = GroupSpec::Kind::Table;
    g.order = j.at("order").get<int>();
    g.table = j.at("elements").get<std::vector<int>>();
  } else {
    throw ConfigError("unknown group type '" + type + "'");
  }
  if (j.contains("images")) {
    g.generatorImages = j.at("images").get<std::vector<int>>();
  }
  return g;
}

json group_to_json(const GroupSpec& g) {
  json j;
  switch (g.kind) {
    case GroupSpec::Kind::Cyclic:
      j["type"] = "cyclic";
      j["n"] = g.n;
      break;
    case GroupSpec::Kind::Dihedral:
      j["type"] = "dihedral";
      j["n"] = g.n;
      break;
    case GroupSpec::Kind::Congruence:
      j["type"] = "congruence";
      j["q"] = g.q;
      break;
    case GroupSpec::Kind::Table:
      j["type"] = "table";
      j["order"] = g.order;
      j["elements"] = g.table;
      break;
  }
  if (!g.generatorImages.empty()) j["images"] = g.generatorImages;
  return j;
}

RepSelector rep_from_json(const json& j) {
  RepSelector r;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "trivial") {
      r.kind = RepSelector::Kind::Trivial;
    } else if (name == "regular") {
      r.kind = RepSelector::Kind::Regular;
    } else if (name == "all-nontrivial") {
      r.kind = RepSelector::Kind::AllNontrivial;
    } else {
      throw ConfigError("unknown rep selector '" + name + "'");
    }
    return r;
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "character") {
    r.kind = RepSelector::Kind::Character;
    r.theta = j.at("theta").get<std::vector<double>>();
  } else if (type == "irrep") {
    r.kind = RepSelector::Kind::IrrepIndex;
    r.index = j.at("index").get<int>();
  } else {
    throw ConfigError("unknown rep selector type '" + type + "'");
  }
  return r;
}

json rep_to_json(const RepSelector& r) {
  switch (r.kind) {
    case RepSelector::Kind::Trivial:
      return "trivial";
    case RepSelector::Kind::Regular:
      return "regular";
    case RepSelector::Kind::AllNontrivial:
      return "all-nontrivial";
    case RepSelector::Kind::Character:
      return json{{"type", "character"}, {"theta", r.theta}};
    case RepSelector::Kind::IrrepIndex:
      return json{{"type", "irrep"}, {"index", r.index}};
  }
  return nullptr;
}

ScanRectangle rect_from_json(const json& j) {
  ScanRectangle r;
  r.reMin = j.at("reMin").get<double>();
  r.reMax = j.at("reMax").get<double>();
  r.imMin = j.at("imMin").get<double>();
  r.imMax = j.at("imMax").get<double>();
  if (j.contains("gridRe")) r.gridRe = j.at("gridRe").get<int>();
  if (j.contains("gridIm")) r.gridIm = j.at("gridIm").get<int>();
  if (j.contains("M")) r.M = j.at("M").get<int>();
  return r;
}

json rect_to_json(const ScanRectangle& r) {
  return json{{"reMin", r.reMin},   {"reMax", r.reMax}, {"imMin", r.imMin},
              {"imMax", r.imMax},   {"gridRe", r.gridRe},
              {"gridIm", r.gridIm}, {"M", r.M}};
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    RunConfig c;
    if (j.contains("command")) c.command = j.at("command").get<std::string>();
    c.surface = surface_from_json(j.at("surface"));
    if (j.contains("group")) c.group = group_from_json(j.at("group"));
    if (j.contains("rep")) c.rep = rep_from_json(j.at("rep"));
    if (j.contains("rectangle")) c.rectangle = rect_from_json(j.at("rectangle"));
    if (j.contains("nodes")) c.nodes = j.at("nodes").get<int>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("checkpoint")) {
      c.checkpointPath = j.at("checkpoint").get<std::string>();
    }
    if (j.contains("out")) c.outDir = j.at("out").get<std::string>();
    if (j.contains("s")) {
      c.point = Complex(j.at("s").at(0).get<double>(), j.at("s").at(1).get<double>());
    }
    if (j.contains("maxWordLength")) {
      c.maxWordLength = j.at("maxWordLength").get<int>();
    }
    if (j.contains("kMax")) c.kMax = j.at("kMax").get<int>();
    if (c.tol <= 0.0) throw ConfigError("tolerance must be positive");
    if (c.workers < 1) throw ConfigError("workers must be >= 1");
    c.rectangle.M = c.nodes;
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

SurfaceDescription parse_surface_json(const std::string& text) {
  try {
    return surface_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("surface JSON error: ") + e.what());
  }
}

std::uint64_t RunConfig::hash() const {
  // Canonical content hash over the scientific parameters; output and
  // checkpoint paths are irrelevant to the result and excluded.
  json j;
  j["command"] = command;
  j["surface"] = surface_to_json(surface);
  if (group) j["group"] = group_to_json(*group);
  j["rep"] = rep_to_json(rep);
  j["rectangle"] = rect_to_json(rectangle);
  j["nodes"] = nodes;
  j["tol"] = tol;
  j["workers"] = workers;
  j["s"] = {point.real(), point.imag()};
  j["maxWordLength"] = maxWordLength;
  j["kMax"] = kMax;
  return fnv1a(j.dump());
}

GroupHom resolve_hom(const SchottkyData& s, const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::Congruence:
      return congruence_hom(s, spec.q);
    case GroupSpec::Kind::Cyclic: {
      auto g = build_cyclic(spec.n);
      std::vector<int> images = spec.generatorImages;
      if (images.empty()) {
        images.resize(s.m);
        for (int j = 0; j < s.m; ++j) images[j] = (j + 1) % spec.n;
      }
      return make_hom(std::move(g), images);
    }
    case GroupSpec::Kind::Dihedral: {
      auto g = build_dihedral(spec.n);
      std::vector<int> images = spec.generatorImages;
      if (images.empty()) {
        // Rotation r and the reflection s generate.
        images.resize(s.m);
        for (int j = 0; j < s.m; ++j) images[j] = j % 2 == 0 ? 1 : spec.n;
      }
      return make_hom(std::move(g), images);
    }
    case GroupSpec::Kind::Table: {
      auto g = build_from_table(spec.order, spec.table);
      if (spec.generatorImages.empty()) {
        throw ConfigError("table groups need explicit generator images");
      }
      return make_hom(std::move(g), spec.generatorImages);
    }
  }
  throw ConfigError("unresolved group spec");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_complex(Complex v) {
  return format_double(v.real()) + (v.imag() < 0 ? "-" : "+") +
         format_double(std::abs(v.imag())) + "i";
}

}  // namespace resonator
