#pragma once

// Problem-variant descriptor shared by the formulation, solvers and validator.

#include <stdexcept>
#include <string>

namespace relayplan {

enum class HopMode { OneHop, TwoHop, Splittable };

// Fixed: one design for a single (peak) demand column.
// Dynamic: an independent design per period.
// SemiDynamic: shared antenna placement, per-period routing.
// Static: one design checked against every period's demands.
enum class TemporalMode { Fixed, Dynamic, SemiDynamic, Static };

struct Variant {
  HopMode hops = HopMode::OneHop;
  bool lte = false;
  TemporalMode temporal = TemporalMode::Fixed;
};

inline const char* hop_mode_name(HopMode m) {
  switch (m) {
    case HopMode::OneHop: return "one-hop";
    case HopMode::TwoHop: return "two-hop";
    case HopMode::Splittable: default: return "splittable";
  }
}

inline const char* temporal_mode_name(TemporalMode m) {
  switch (m) {
    case TemporalMode::Fixed: return "fixed";
    case TemporalMode::Dynamic: return "dynamic";
    case TemporalMode::SemiDynamic: return "semi-dynamic";
    case TemporalMode::Static: default: return "static";
  }
}

// e.g. "two-hop-lte"; used in CLI flags, CSV rows and plan files.
inline std::string variant_name(const Variant& v) {
  std::string name = hop_mode_name(v.hops);
  if (v.lte) name += "-lte";
  return name;
}

inline HopMode parse_hop_mode(const std::string& s) {
  if (s == "one-hop") return HopMode::OneHop;
  if (s == "two-hop") return HopMode::TwoHop;
  if (s == "splittable") return HopMode::Splittable;
  throw std::invalid_argument("unknown hop mode: " + s);
}

inline TemporalMode parse_temporal_mode(const std::string& s) {
  if (s == "fixed") return TemporalMode::Fixed;
  if (s == "dynamic") return TemporalMode::Dynamic;
  if (s == "semi-dynamic") return TemporalMode::SemiDynamic;
  if (s == "static") return TemporalMode::Static;
  throw std::invalid_argument("unknown temporal mode: " + s);
}

// Accepts the combined form produced by variant_name().
inline Variant parse_variant(const std::string& s, TemporalMode temporal = TemporalMode::Fixed) {
  Variant v;
  v.temporal = temporal;
  std::string base = s;
  const std::string suffix = "-lte";
  if (base.size() > suffix.size() &&
      base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    v.lte = true;
    base = base.substr(0, base.size() - suffix.size());
  }
  v.hops = parse_hop_mode(base);
  return v;
}

}  // namespace relayplan
