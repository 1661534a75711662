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

#ifndef FGTTS_CORPUS_MANIFEST_H_
#define FGTTS_CORPUS_MANIFEST_H_

#include <string>

#include "fgtts/corpus/types.h"

namespace fgtts::corpus {

// A manifest is a directory-relative text file whose first line is the
// schema tag, followed by "#key<TAB>value" metadata lines and one record per
// line:
//
//   utt_id  transcript  token_ids  durations  coarse_label  mel_path  pitch_path
//
// Fields are tab separated. token_ids and durations are space separated
// integers; "-" marks absent durations or label. Feature paths are relative
// to the manifest's directory.
inline constexpr const char* kManifestSchema = "#fgtts-manifest v1";
inline constexpr const char* kManifestFileName = "manifest.tsv";

// Writes `path` and every feature file. Records without feature paths get
// "features/<utt_id>.mel" and "features/<utt_id>.f0".
void SaveManifest(const CorpusManifest& manifest, const std::string& path);

// `path` may be the manifest file or a directory containing manifest.tsv.
// Every record is validated; failures raise ManifestError.
CorpusManifest LoadManifest(const std::string& path);

bool operator==(const UtteranceRecord& a, const UtteranceRecord& b);
bool operator==(const CorpusManifest& a, const CorpusManifest& b);

}  // namespace fgtts::corpus

#endif  // FGTTS_CORPUS_MANIFEST_H_
