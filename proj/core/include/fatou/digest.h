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

#ifndef FATOU_DIGEST_H_
#define FATOU_DIGEST_H_

#include <string>
#include <string_view>

#include "fatou/element.h"

namespace fatou {

std::string sha256_hex(std::string_view data);

// First 16 hex characters of the SHA-256 digest.
std::string short_digest(std::string_view data);

// Short digest of the canonical JSON encoding. Equal elements in equal
// spaces always share a digest.
std::string element_digest(const Element& x);

}  // namespace fatou

#endif  // FATOU_DIGEST_H_
