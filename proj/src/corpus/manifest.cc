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

#include "fgtts/corpus/manifest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgtts/common/error.h"
#include "fgtts/common/feature_io.h"
#include "fgtts/common/strings.h"

namespace fgtts::corpus {

namespace fs = std::filesystem;

namespace {

std::string JoinInts(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::vector<int> ParseInts(const std::string& utt_id, const std::string& field,
                           const std::string& what) {
  std::vector<int> out;
  for (const std::string& tok : SplitWhitespace(field)) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ManifestError(utt_id, "bad " + what + " value '" + tok + "'");
    }
  }
  return out;
}

Matrix PitchToMatrix(const PitchTrack& p) {
  Matrix m(p.size(), 1);
  for (int t = 0; t < p.size(); ++t) m(t, 0) = p.f0_hz[t];
  return m;
}

}  // namespace

void SaveManifest(const CorpusManifest& manifest, const std::string& path) {
  fs::path file(path);
  if (fs::is_directory(file)) file /= kManifestFileName;
  fs::path dir = file.parent_path();
  if (!dir.empty()) fs::create_directories(dir);

  std::ofstream out(file, std::ios::binary);
  if (!out) throw ManifestError("", "cannot write manifest " + file.string());
  out << kManifestSchema << "\n";
  out << "#sample_rate_hz\t" << manifest.sample_rate_hz << "\n";
  out << "#frame_shift_ms\t" << FormatDouble(manifest.frame_shift_ms) << "\n";
  out << "#n_mels\t" << manifest.n_mels << "\n";
  for (const UtteranceRecord& r : manifest.utterances) {
    r.Validate();
    if (r.utt_id.empty() || r.utt_id.find_first_of("\t\n/") != std::string::npos) {
      throw ManifestError(r.utt_id, "utterance id must be non-empty without tabs or slashes");
    }
    if (r.transcript.find_first_of("\t\n") != std::string::npos) {
      throw ManifestError(r.utt_id, "transcript contains a tab or newline");
    }
    std::string mel_path = r.mel_path.empty() ? "features/" + r.utt_id + ".mel" : r.mel_path;
    std::string pitch_path = r.pitch_path.empty() ? "features/" + r.utt_id + ".f0" : r.pitch_path;
    fs::create_directories((dir / mel_path).parent_path());
    fs::create_directories((dir / pitch_path).parent_path());
    WriteFeatureFile((dir / mel_path).string(), r.mel.frames);
    WriteFeatureFile((dir / pitch_path).string(), PitchToMatrix(r.pitch));
    out << r.utt_id << '\t' << r.transcript << '\t' << JoinInts(r.token_ids) << '\t'
        << (r.durations ? JoinInts(*r.durations) : "-") << '\t'
        << (r.coarse_label ? *r.coarse_label : "-") << '\t' << mel_path << '\t'
        << pitch_path << "\n";
  }
  if (!out) throw ManifestError("", "write failed for " + file.string());
}

CorpusManifest LoadManifest(const std::string& path) {
  fs::path file(path);
  if (fs::is_directory(file)) file /= kManifestFileName;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ManifestError("", "cannot open manifest " + file.string());
  fs::path dir = file.parent_path();

  CorpusManifest m;
  std::string line;
  if (!std::getline(in, line) || Trim(line) != kManifestSchema) {
    throw ManifestError("", "schema mismatch in " + file.string() + ": expected '" +
                                kManifestSchema + "'");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = Split(line, "\t");
    if (line[0] == '#') {
      if (f.size() != 2) continue;
      const std::string key = f[0].substr(1);
      try {
        if (key == "sample_rate_hz") m.sample_rate_hz = std::stoi(f[1]);
        if (key == "frame_shift_ms") m.frame_shift_ms = std::stod(f[1]);
        if (key == "n_mels") m.n_mels = std::stoi(f[1]);
      } catch (const std::exception&) {
        throw ManifestError("", "bad metadata on line " + std::to_string(line_no));
      }
      continue;
    }
    if (f.size() != 7) {
      throw ManifestError(f.empty() ? "" : f[0], "line " + std::to_string(line_no) +
                                                     " has " + std::to_string(f.size()) +
                                                     " fields, expected 7");
    }
    UtteranceRecord r;
    r.utt_id = f[0];
    r.transcript = f[1];
    r.token_ids = ParseInts(r.utt_id, f[2], "token id");
    if (f[3] != "-") r.durations = ParseInts(r.utt_id, f[3], "duration");
    if (f[4] != "-") r.coarse_label = f[4];
    r.mel_path = f[5];
    r.pitch_path = f[6];
    try {
      r.mel.frames = ReadFeatureFile((dir / r.mel_path).string());
      Matrix p = ReadFeatureFile((dir / r.pitch_path).string());
      if (p.cols() != 1) throw FeatureFileError("pitch file must have one column");
      r.pitch = PitchTrack::FromF0(std::vector<double>(p.data(), p.data() + p.rows()));
    } catch (const FeatureFileError& e) {
      throw ManifestError(r.utt_id, e.what());
    }
    r.mel.sample_rate_hz = m.sample_rate_hz;
    r.mel.frame_shift_ms = m.frame_shift_ms;
    if (m.n_mels > 0 && r.mel.num_bins() != m.n_mels) {
      throw ManifestError(r.utt_id, "mel has " + std::to_string(r.mel.num_bins()) +
                                        " bins, manifest declares " +
                                        std::to_string(m.n_mels));
    }
    r.Validate();
    m.utterances.push_back(std::move(r));
  }
  return m;
}

bool operator==(const UtteranceRecord& a, const UtteranceRecord& b) {
  return a.utt_id == b.utt_id && a.transcript == b.transcript &&
         a.token_ids == b.token_ids && a.durations == b.durations &&
         a.coarse_label == b.coarse_label && a.mel.frames == b.mel.frames &&
         a.mel.sample_rate_hz == b.mel.sample_rate_hz &&
         a.mel.frame_shift_ms == b.mel.frame_shift_ms && a.pitch == b.pitch;
}

bool operator==(const CorpusManifest& a, const CorpusManifest& b) {
  return a.sample_rate_hz == b.sample_rate_hz && a.frame_shift_ms == b.frame_shift_ms &&
         a.n_mels == b.n_mels && a.utterances == b.utterances;
}

}  // namespace fgtts::corpus
