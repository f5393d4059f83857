// Copyright 2026 The lexcomp Authors
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

#pragma once

#include <filesystem>
#include <optional>

namespace lexcomp {

// Root of the shipped data catalog (prompts/, fewshot/, columns/).
// Lookup order: explicit override, $LEXCOMP_DATA_DIR, the source tree the
// library was built from, then the install prefix.
std::filesystem::path data_dir(const std::optional<std::filesystem::path>& override_dir = std::nullopt);

}  // namespace lexcomp
