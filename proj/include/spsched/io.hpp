#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "spsched/core.hpp"

namespace spsched {

using json = nlohmann::json;

/// Numbers arrive as JSON numbers or as strings ("5/8", "3.5"). Exact mode
/// reads decimal text digit by digit, so "0.1" means one tenth.
template <class T>
T parse_number(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return T(static_cast<long>(v.get<long long>()));
    if (v.is_number_unsigned()) return T(static_cast<long>(v.get<unsigned long long>()));
    if (v.is_number_float()) return arith<T>::parse(json(v.get<double>()).dump());
    if (v.is_string()) return arith<T>::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw StructuralError(where + ": " + e.what());
  }
  throw StructuralError(where + ": expected a number or a rational string");
}

template <class T>
json number_to_json(const T& v) {
  if constexpr (arith<T>::exact) {
    if (v.is_integer()) {
      const double d = v.to_double();
      if (d >= -1e15 && d <= 1e15) return json(static_cast<long long>(d));
    }
    return json(v.str());
  } else {
    return json(v);
  }
}

template <class T>
Instance<T> parse_instance(const json& doc, std::vector<std::string>* warnings = nullptr) {
  if (!doc.is_object()) throw StructuralError("instance: expected a JSON object");
  if (!doc.contains("machines") || !doc.at("machines").is_array() || doc.at("machines").empty())
    throw StructuralError("instance.machines: expected a non-empty array");
  if (!doc.contains("jobs") || !doc.at("jobs").is_array() || doc.at("jobs").empty())
    throw StructuralError("instance.jobs: expected a non-empty array");

  std::vector<T> costs;
  for (std::size_t i = 0; i < doc.at("machines").size(); ++i) {
    const auto& mj = doc.at("machines").at(i);
    const std::string where = "machines[" + std::to_string(i) + "].cost";
    if (!mj.is_object() || !mj.contains("cost")) throw StructuralError(where + ": missing");
    costs.push_back(parse_number<T>(mj.at("cost"), where));
  }
  bool sorted = true;
  for (std::size_t i = 0; i + 1 < costs.size(); ++i)
    if (costs[i + 1] < costs[i]) sorted = false;
  if (!sorted && warnings)
    warnings->push_back("machine costs were not sorted; re-sorted ascending");

  std::vector<Job<T>> jobs;
  for (std::size_t i = 0; i < doc.at("jobs").size(); ++i) {
    const auto& jj = doc.at("jobs").at(i);
    const std::string where = "jobs[" + std::to_string(i) + "]";
    if (!jj.is_object()) throw StructuralError(where + ": expected an object");
    for (const char* field : {"id", "p", "w"})
      if (!jj.contains(field)) throw StructuralError(where + "." + field + ": missing");
    if (!jj.at("id").is_string()) throw StructuralError(where + ".id: expected a string");
    Job<T> job;
    job.id = jj.at("id").get<std::string>();
    job.p = parse_number<T>(jj.at("p"), where + ".p");
    job.w = parse_number<T>(jj.at("w"), where + ".w");
    if (!(job.p > T(0))) throw StructuralError(where + ".p: must be positive");
    if (job.w < T(0)) throw StructuralError(where + ".w: must be non-negative");
    jobs.push_back(std::move(job));
  }
  return Instance<T>(std::move(jobs), std::move(costs));
}

template <class T>
json instance_to_json(const Instance<T>& inst) {
  json machines = json::array();
  for (const auto& c : inst.costs()) machines.push_back({{"cost", number_to_json(c)}});
  json jobs = json::array();
  for (const auto& j : inst.jobs())
    jobs.push_back({{"id", j.id}, {"p", number_to_json(j.p)}, {"w", number_to_json(j.w)}});
  return {{"machines", machines}, {"jobs", jobs}};
}

template <class T>
Schedule<T> parse_schedule(const json& doc) {
  if (!doc.is_object()) throw StructuralError("schedule: expected a JSON object");
  if (!doc.contains("private_completion") || !doc.at("private_completion").is_object())
    throw StructuralError("schedule.private_completion: expected an object");
  if (!doc.contains("pieces") || !doc.at("pieces").is_array())
    throw StructuralError("schedule.pieces: expected an array");
  Schedule<T> s;
  for (const auto& [id, value] : doc.at("private_completion").items())
    s.private_completion[id] = parse_number<T>(value, "private_completion." + id);
  for (std::size_t i = 0; i < doc.at("pieces").size(); ++i) {
    const auto& pj = doc.at("pieces").at(i);
    const std::string where = "pieces[" + std::to_string(i) + "]";
    for (const char* field : {"job", "machine", "start", "end"})
      if (!pj.contains(field)) throw StructuralError(where + "." + field + ": missing");
    Piece<T> pc;
    pc.job = pj.at("job").get<std::string>();
    if (!pj.at("machine").is_number_integer() && !pj.at("machine").is_number_unsigned())
      throw StructuralError(where + ".machine: expected an integer");
    pc.machine = pj.at("machine").get<int>();
    pc.start = parse_number<T>(pj.at("start"), where + ".start");
    pc.end = parse_number<T>(pj.at("end"), where + ".end");
    if (pc.start < T(0) || pc.end < pc.start)
      throw StructuralError(where + ": piece bounds out of order");
    s.pieces.push_back(std::move(pc));
  }
  return normalized(std::move(s));
}

template <class T>
json schedule_to_json(const Schedule<T>& s) {
  json completion = json::object();
  for (const auto& [id, c] : s.private_completion) completion[id] = number_to_json(c);
  json pieces = json::array();
  for (const auto& pc : s.pieces)
    pieces.push_back({{"job", pc.job},
                      {"machine", pc.machine},
                      {"start", number_to_json(pc.start)},
                      {"end", number_to_json(pc.end)}});
  return {{"private_completion", completion}, {"pieces", pieces}};
}

template <class T>
json overlap_report_to_json(const OverlapReport<T>& rep, const Instance<T>& inst) {
  json per_job = json::object();
  for (std::size_t j = 0; j < inst.n(); ++j) {
    json row = json::object();
    for (int i = 1; i <= inst.m(); ++i) {
      const auto& v = rep.per_job_per_machine[j][static_cast<std::size_t>(i - 1)];
      if (!arith<T>::is_zero(v)) row["M" + std::to_string(i)] = number_to_json(v);
    }
    per_job[inst.job(j).id] = std::move(row);
  }
  return {{"per_job", per_job},
          {"total_weighted", number_to_json(rep.total_weighted)},
          {"total_weighted_float", arith<T>::to_double(rep.total_weighted)}};
}

}  // namespace spsched
