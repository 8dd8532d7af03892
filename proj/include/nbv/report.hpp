#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "nbv/frequency_scorer.hpp"
#include "nbv/metrics.hpp"

namespace nbv {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["selected_ids"] = r.selected_ids;
  j["psnr_mean"] = r.psnr_mean;
  j["ssim_mean"] = r.ssim_mean;
  if (r.lpips_mean)
    j["lpips_mean"] = *r.lpips_mean;
  else
    j["lpips_mean"] = nullptr;
  j["trajectory_length_selected"] = r.trajectory_length_selected;
  j["trajectory_length_full"] = r.trajectory_length_full;
  j["completion"] = r.completion;
  j["config"] = r.config_echo;
  auto& steps = j["per_step"] = nlohmann::ordered_json::array();
  for (const auto& s : r.per_step) {
    nlohmann::ordered_json js;
    js["step"] = s.step;
    js["chosen_id"] = s.chosen_id;
    js["registration_rmsd"] = s.registration_rmsd;
    js["fallback"] = s.fallback;
    js["widen_count"] = s.widen_count;
    auto& cands = js["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : s.candidates)
      cands.push_back({{"id", c.view_id}, {"median_frequency", c.median_frequency}});
    steps.push_back(js);
  }
  return j;
}

inline RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.selected_ids = j.at("selected_ids").get<std::vector<int>>();
  r.psnr_mean = j.at("psnr_mean");
  r.ssim_mean = j.at("ssim_mean");
  if (!j.at("lpips_mean").is_null()) r.lpips_mean = j.at("lpips_mean").get<double>();
  r.trajectory_length_selected = j.at("trajectory_length_selected");
  r.trajectory_length_full = j.at("trajectory_length_full");
  r.completion = j.at("completion");
  r.config_echo = j.at("config");
  for (const auto& js : j.at("per_step")) {
    StepReport s;
    s.step = js.at("step");
    s.chosen_id = js.at("chosen_id");
    s.registration_rmsd = js.at("registration_rmsd");
    s.fallback = js.at("fallback");
    s.widen_count = js.at("widen_count");
    for (const auto& jc : js.at("candidates"))
      s.candidates.push_back({jc.at("id"), jc.at("median_frequency")});
    r.per_step.push_back(s);
  }
  return r;
}

inline void write_report(const RunReport& r, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << report_to_json(r).dump(2) << "\n";
}

inline RunReport read_report(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  nlohmann::json j;
  f >> j;
  return report_from_json(j);
}

/// Per-step candidate scores: step, candidate_id, median_frequency, chosen.
inline void write_scores_csv(const RunReport& r, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << "step,candidate_id,median_frequency,chosen\n";
  for (const auto& s : r.per_step)
    for (const auto& c : s.candidates)
      f << s.step << "," << c.view_id << "," << detail::fmt_double(c.median_frequency)
        << "," << (c.view_id == s.chosen_id ? 1 : 0) << "\n";
}

/// Spectrum histogram dump: bin_center, magnitude.
inline void write_histogram_csv(const SpectrumSummary& s,
                                const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << "bin_center,magnitude\n";
  for (const auto& [center, mag] : s.histogram)
    f << detail::fmt_double(center) << "," << detail::fmt_double(mag) << "\n";
}

}  // namespace nbv
