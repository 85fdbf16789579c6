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

#ifndef FATOU_REPORT_H_
#define FATOU_REPORT_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fatou {

enum class Verdict { kPass, kFail, kUnknown };

std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

// Fail beats Unknown beats Pass.
Verdict combine(Verdict a, Verdict b);

// 0 pass, 1 fail, 2 unknown.
int exit_code(Verdict v);

// Usage errors, malformed input.
inline constexpr int kUsageExitCode = 3;

struct ReportItem {
  std::string name;
  Verdict status = Verdict::kPass;
  std::string detail;
  nlohmann::json evidence = nlohmann::json::object();
};

// A list of checked assertions with their evidence. Serialization is
// canonical so that reports can be compared byte for byte.
class Report {
 public:
  Report() = default;
  explicit Report(std::string title) : title_(std::move(title)) {}

  const std::string& title() const { return title_; }
  nlohmann::json& parameters() { return parameters_; }
  const nlohmann::json& parameters() const { return parameters_; }
  const std::vector<ReportItem>& items() const { return items_; }

  ReportItem& add(std::string name, Verdict status, std::string detail,
                  nlohmann::json evidence = nlohmann::json::object());
  // Appends every item of `other`, prefixing names.
  void merge(const Report& other, const std::string& prefix);

  // Pass for an empty report.
  Verdict overall() const;
  const ReportItem* find(const std::string& name) const;

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
  std::string to_text() const;

 private:
  std::string title_;
  nlohmann::json parameters_ = nlohmann::json::object();
  std::vector<ReportItem> items_;
};

}  // namespace fatou

#endif  // FATOU_REPORT_H_
