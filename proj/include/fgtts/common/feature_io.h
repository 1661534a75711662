// Copyright (c) 2026 The fgtts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FGTTS_COMMON_FEATURE_IO_H_
#define FGTTS_COMMON_FEATURE_IO_H_

#include <string>

#include "fgtts/common/matrix.h"

namespace fgtts {

// Feature files: 4-byte magic "PLF1", uint32 rows, uint32 cols, uint32
// reserved (0), then rows*cols little-endian float32 values in row-major
// order. Values are rounded to float32 on write.
void WriteFeatureFile(const std::string& path, const Matrix& m);
Matrix ReadFeatureFile(const std::string& path);

}  // namespace fgtts

#endif  // FGTTS_COMMON_FEATURE_IO_H_
