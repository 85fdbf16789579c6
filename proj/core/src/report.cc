// Copyright 2026 The Fatou Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fatou/report.h"

#include <sstream>

#include "fatou/errors.h"

namespace fatou {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kUnknown:
      return "unknown";
  }
  return "unknown";
}

Verdict verdict_from_name(const std::string& name) {
  if (name == "pass") return Verdict::kPass;
  if (name == "fail") return Verdict::kFail;
  if (name == "unknown") return Verdict::kUnknown;
  throw ParseError("unknown verdict '" + name + "'");
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::kFail || b == Verdict::kFail) return Verdict::kFail;
  if (a == Verdict::kUnknown || b == Verdict::kUnknown) return Verdict::kUnknown;
  return Verdict::kPass;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return 0;
    case Verdict::kFail:
      return 1;
    case Verdict::kUnknown:
      return 2;
  }
  return 2;
}

ReportItem& Report::add(std::string name, Verdict status, std::string detail,
                        nlohmann::json evidence) {
  items_.push_back({std::move(name), status, std::move(detail), std::move(evidence)});
  return items_.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& item : other.items_) {
    items_.push_back({prefix + item.name, item.status, item.detail, item.evidence});
  }
}

Verdict Report::overall() const {
  Verdict out = Verdict::kPass;
  for (const auto& item : items_) out = combine(out, item.status);
  return out;
}

const ReportItem* Report::find(const std::string& name) const {
  for (const auto& item : items_) {
    if (item.name == name) return &item;
  }
  return nullptr;
}

nlohmann::json Report::to_json() const {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : items_) {
    items.push_back({{"name", item.name},
                     {"status", verdict_name(item.status)},
                     {"detail", item.detail},
                     {"evidence", item.evidence}});
  }
  return {{"schema", "fatou.report/1"},
          {"title", title_},
          {"parameters", parameters_},
          {"overall", verdict_name(overall())},
          {"items", items}};
}

Report Report::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema") != "fatou.report/1") throw ParseError("not a fatou.report/1 document");
    Report r(j.at("title").get<std::string>());
    r.parameters_ = j.value("parameters", nlohmann::json::object());
    for (const auto& item : j.at("items")) {
      r.add(item.at("name").get<std::string>(),
            verdict_from_name(item.at("status").get<std::string>()),
            item.value("detail", std::string()),
            item.value("evidence", nlohmann::json::object()));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << title_ << "\n";
  if (!parameters_.empty()) os << "  parameters: " << parameters_.dump() << "\n";
  for (const auto& item : items_) {
    os << "  [" << verdict_name(item.status) << "] " << item.name;
    if (!item.detail.empty()) os << ": " << item.detail;
    os << "\n";
  }
  os << "overall: " << verdict_name(overall()) << "\n";
  return os.str();
}

}  // namespace fatou
