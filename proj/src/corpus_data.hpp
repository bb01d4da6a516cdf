#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace treeflip::detail {

// Instance documents from data/corpus, compiled in at build time.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_corpus();

}  // namespace treeflip::detail
