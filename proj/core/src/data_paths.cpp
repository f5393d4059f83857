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

#include "lexcomp/data_paths.hpp"

#include <cstdlib>

#include "lexcomp/error.hpp"

namespace lexcomp {

std::filesystem::path data_dir(const std::optional<std::filesystem::path>& override_dir) {
  namespace fs = std::filesystem;
  if (override_dir) {
    if (!fs::is_directory(*override_dir)) {
      throw ConfigError("data directory does not exist: " + override_dir->string());
    }
    return *override_dir;
  }
  if (const char* env = std::getenv("LEXCOMP_DATA_DIR"); env != nullptr && *env != '\0') {
    if (!fs::is_directory(env)) throw ConfigError(std::string("LEXCOMP_DATA_DIR is not a directory: ") + env);
    return env;
  }
  for (const char* candidate : {LEXCOMP_SOURCE_DATA_DIR, LEXCOMP_INSTALL_DATA_DIR}) {
    if (fs::is_directory(fs::path(candidate) / "prompts")) return candidate;
  }
  throw ConfigError("prompt/data catalog not found; set LEXCOMP_DATA_DIR");
}

}  // namespace lexcomp
