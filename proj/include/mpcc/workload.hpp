#pragma once

// Task families and task sampling. A task class describes a population of
// jobs by parameter ranges; sampling a class yields one concrete TaskSpec.
// Sizes and compute intensities spread over orders of magnitude, so both
// are drawn log-uniformly; the structural parameters gamma and beta are
// drawn uniformly. Real-time streams use separate classes with gamma and
// beta pinned, varying only the task size around a base value.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpcc/core.hpp"
#include "mpcc/io.hpp"
#include "mpcc/random.hpp"

namespace mpcc {

// A population of batch tasks described by parameter ranges.
struct TaskClass {
  std::string name;
  Interval size_mb;             // input load L
  Interval compute_intensity;   // Flops per MB of input
  Interval divisible_fraction;  // gamma, the distributable share
  Interval result_ratio;        // beta

  TaskClass(std::string name_, Interval size_mb_, Interval compute_intensity_,
            Interval divisible_fraction_, Interval result_ratio_)
      : name(std::move(name_)),
        size_mb(size_mb_),
        compute_intensity(compute_intensity_),
        divisible_fraction(divisible_fraction_),
        result_ratio(result_ratio_) {
    detail::require(!name.empty(), "TaskClass: name must not be empty");
    detail::require(size_mb.lo > 0.0, "TaskClass: size range must be positive");
    detail::require(compute_intensity.lo > 0.0,
                    "TaskClass: compute-intensity range must be positive");
    detail::require(divisible_fraction.lo > 0.0 && divisible_fraction.hi <= 1.0,
                    "TaskClass: divisible-fraction range must lie in (0, 1]");
    detail::require(result_ratio.lo >= 0.0 && result_ratio.hi <= 1.0,
                    "TaskClass: result-ratio range must lie in [0, 1]");
  }
};

// A real-time stream family: structure is fixed, only the size varies.
struct RtTaskClass {
  std::string name;
  double divisible_fraction;  // gamma
  double result_ratio;        // beta
  Interval size_multiplier{0.5, 2.0};

  RtTaskClass(std::string name_, double divisible_fraction_, double result_ratio_)
      : name(std::move(name_)),
        divisible_fraction(divisible_fraction_),
        result_ratio(result_ratio_) {
    detail::require(!name.empty(), "RtTaskClass: name must not be empty");
    detail::require(std::isfinite(divisible_fraction) && divisible_fraction > 0.0 &&
                        divisible_fraction <= 1.0,
                    "RtTaskClass: divisible fraction must lie in (0, 1]");
    detail::require(std::isfinite(result_ratio) && result_ratio >= 0.0 && result_ratio <= 1.0,
                    "RtTaskClass: result ratio must lie in [0, 1]");
  }
};

// One concrete task. The sequential fraction defaults to the complement of
// the divisible fraction but can be pinned independently, which admission
// experiments use to sweep f without changing anything else.
struct TaskSpec {
  double size_mb;
  double compute_intensity;
  double divisible_fraction;   // gamma
  double result_ratio;         // beta
  double sequential_fraction;  // f

  TaskSpec(double size_mb_, double compute_intensity_, double divisible_fraction_,
           double result_ratio_)
      : TaskSpec(size_mb_, compute_intensity_, divisible_fraction_, result_ratio_,
                 1.0 - divisible_fraction_) {}

  TaskSpec(double size_mb_, double compute_intensity_, double divisible_fraction_,
           double result_ratio_, double sequential_fraction_)
      : size_mb(size_mb_),
        compute_intensity(compute_intensity_),
        divisible_fraction(divisible_fraction_),
        result_ratio(result_ratio_),
        sequential_fraction(sequential_fraction_) {
    detail::require(std::isfinite(size_mb) && size_mb > 0.0,
                    "TaskSpec: size must be positive and finite");
    detail::require(std::isfinite(compute_intensity) && compute_intensity > 0.0,
                    "TaskSpec: compute intensity must be positive and finite");
    detail::require(std::isfinite(divisible_fraction) && divisible_fraction > 0.0 &&
                        divisible_fraction <= 1.0,
                    "TaskSpec: divisible fraction must lie in (0, 1]");
    detail::require(std::isfinite(result_ratio) && result_ratio >= 0.0 && result_ratio <= 1.0,
                    "TaskSpec: result ratio must lie in [0, 1]");
    detail::require(std::isfinite(sequential_fraction) && sequential_fraction >= 0.0 &&
                        sequential_fraction <= 1.0,
                    "TaskSpec: sequential fraction must lie in [0, 1]");
  }

  DivisibilitySpec divisibility() const {
    return DivisibilitySpec(sequential_fraction, result_ratio);
  }
};

// The built-in batch task families.
inline const std::vector<TaskClass>& builtin_classes() {
  static const std::vector<TaskClass> classes = {
      TaskClass("iot_agg", Interval(1e2, 1e3), Interval(1e6, 1e7), Interval(0.6, 0.8),
                Interval(0.05, 0.15)),
      TaskClass("ai_inf", Interval(1e2, 1e4), Interval(1e8, 1e9), Interval(0.7, 0.9),
                Interval(0.1, 0.3)),
      TaskClass("img_sig_pre", Interval(1e3, 1e4), Interval(1e7, 1e8), Interval(0.5, 0.7),
                Interval(0.05, 0.2)),
      TaskClass("sci_data", Interval(1e3, 1e5), Interval(1e8, 1e10), Interval(0.4, 0.6),
                Interval(0.1, 0.25)),
  };
  return classes;
}

// The built-in admission-stream families.
inline const std::vector<RtTaskClass>& builtin_rt_classes() {
  static const std::vector<RtTaskClass> classes = {
      RtTaskClass("A", 0.8, 0.10),
      RtTaskClass("B", 0.8, 0.20),
      RtTaskClass("C", 0.6, 0.40),
      RtTaskClass("D", 0.35, 0.10),
  };
  return classes;
}

namespace detail {
template <class ClassT>
const ClassT& find_by_name(const std::vector<ClassT>& classes, const std::string& name,
                           const char* kind) {
  for (const ClassT& c : classes)
    if (c.name == name) return c;
  std::string known;
  for (const ClassT& c : classes) known += (known.empty() ? "" : ", ") + c.name;
  throw std::domain_error(std::string("unknown ") + kind + " '" + name + "' (known: " + known +
                          ")");
}
}  // namespace detail

inline const TaskClass& find_class(const std::string& name) {
  return detail::find_by_name(builtin_classes(), name, "task class");
}

inline const RtTaskClass& find_rt_class(const std::string& name) {
  return detail::find_by_name(builtin_rt_classes(), name, "rt task class");
}

// Draws one task. Order of draws is fixed (size, intensity, gamma, beta) so
// a given rng state always yields the same task.
inline TaskSpec sample_task(const TaskClass& cls, Rng& rng) {
  const double size = rng.log_uniform(cls.size_mb);
  const double intensity = rng.log_uniform(cls.compute_intensity);
  const double gamma = rng.uniform(cls.divisible_fraction);
  const double beta = rng.uniform(cls.result_ratio);
  return TaskSpec(size, intensity, gamma, beta);
}

// Draws one real-time task: only the size varies, log-uniformly around
// base_size_mb. gamma and beta come through exactly as configured.
inline TaskSpec sample_rt_task(const RtTaskClass& cls, double base_size_mb,
                               double compute_intensity, Rng& rng) {
  detail::require(std::isfinite(base_size_mb) && base_size_mb > 0.0,
                  "sample_rt_task: base size must be positive and finite");
  const double multiplier = rng.log_uniform(cls.size_multiplier);
  return TaskSpec(base_size_mb * multiplier, compute_intensity, cls.divisible_fraction,
                  cls.result_ratio);
}

// Task-class file. One class per line:
//
//   class <name> gamma=<lo:hi> beta=<lo:hi> L=<lo:hi> ci=<lo:hi>
//
// All four ranges are required; '#' starts a comment.
inline std::vector<TaskClass> parse_class_stream(std::istream& in, const std::string& name) {
  std::vector<TaskClass> classes;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = ioutil::strip_comment(raw);
    if (line.empty()) continue;
    const auto tokens = ioutil::split_ws(line);
    if (tokens[0] != "class")
      throw ParseError(name, line_no, "expected a 'class' record, got '" + tokens[0] + "'");
    if (tokens.size() < 2) throw ParseError(name, line_no, "class record needs a name");
    const std::string& cls_name = tokens[1];
    for (const TaskClass& c : classes)
      if (c.name == cls_name)
        throw ParseError(name, line_no, "duplicate class '" + cls_name + "'");

    std::optional<Interval> gamma, beta, size, ci;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string::npos)
        throw ParseError(name, line_no, "unrecognized token '" + tokens[i] + "'");
      const std::string key = tokens[i].substr(0, eq);
      const std::string value = tokens[i].substr(eq + 1);
      const Interval iv = ioutil::parse_interval(value, name, line_no, key);
      if (key == "gamma")
        gamma = iv;
      else if (key == "beta")
        beta = iv;
      else if (key == "L")
        size = iv;
      else if (key == "ci")
        ci = iv;
      else
        throw ParseError(name, line_no, "unrecognized attribute '" + key + "'");
    }
    if (!gamma || !beta || !size || !ci)
      throw ParseError(name, line_no,
                       "class '" + cls_name + "' needs gamma=, beta=, L= and ci= ranges");
    try {
      classes.emplace_back(cls_name, *size, *ci, *gamma, *beta);
    } catch (const std::domain_error& e) {
      throw ParseError(name, line_no, e.what());
    }
  }
  return classes;
}

inline std::vector<TaskClass> parse_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_class_stream(in, path);
}

}  // namespace mpcc
