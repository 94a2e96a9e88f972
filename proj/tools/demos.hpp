#pragma once

#include <functional>
#include <string>
#include <vector>

#include "report.hpp"

namespace gsos::cli {

struct DemoResult {
  bool reproduced = false;
  std::vector<std::string> lines;
  // Campaign report body: subject, verdict, witness, tallies, plus pinned checks.
  json report;
};

struct Demo {
  std::string name;
  std::string summary;
  std::function<DemoResult(const CampaignConfig&)> run;
};

const std::vector<Demo>& demos();
const Demo* findDemo(const std::string& name);

// The context (obs 1 _) ; while (var 1 - lit 1) skip.
Context separatingContext();

}  // namespace gsos::cli
