#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eventdistill/concept_catalog.hpp"
#include "eventdistill/io.hpp"

namespace eventdistill::testing {

// Seven top-level classes with one same-named member concept each, plus a
// few extra concepts and causal links.
inline const char* kSmallCatalog = R"jsonl({"kind":"class","id":"C1","label":"earthquake"}
{"kind":"class","id":"C2","label":"tsunami"}
{"kind":"class","id":"C3","label":"nuclear disaster"}
{"kind":"class","id":"C4","label":"famine"}
{"kind":"class","id":"C5","label":"conflict"}
{"kind":"class","id":"C6","label":"refugee crisis"}
{"kind":"class","id":"C7","label":"war"}
{"id":"Q7944","label":"earthquake","aliases":["quake"],"top_class_id":"C1"}
{"id":"Q8070","label":"tsunami","aliases":[],"top_class_id":"C2"}
{"id":"Q1","label":"nuclear disaster","aliases":["nuclear accident"],"top_class_id":"C3"}
{"id":"Q168247","label":"famine","aliases":["food shortage"],"top_class_id":"C4"}
{"id":"Q180684","label":"conflict","aliases":["conflict (psychological)","dispute","disagreement"],"top_class_id":"C5"}
{"id":"Q20898283","label":"refugee crisis","aliases":["mass migration"],"top_class_id":"C6"}
{"id":"Q198","label":"war","aliases":["armed conflict"],"top_class_id":"C7"}
{"id":"Q2","label":"landslide","aliases":[],"top_class_id":"C1"}
{"id":"Q3","label":"heat wave","aliases":[]}
{"kind":"causal","cause":"Q7944","effect":"Q8070","property":"has_effect"}
{"kind":"causal","cause":"Q20898283","effect":"Q168247","property":"has_cause"}
{"kind":"causal","cause":"Q198","effect":"Q168247","property":"has_contributing_factor"}
{"kind":"causal","cause":"Q168247","effect":"Q3","property":"has_cause"}
)jsonl";

inline ConceptCatalog small_catalog() { return ConceptCatalog::parse(kSmallCatalog); }

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("eventdistill_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path source_dir() { return EVENTDISTILL_SOURCE_DIR; }

}  // namespace eventdistill::testing
