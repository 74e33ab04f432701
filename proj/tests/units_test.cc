// Copyright 2026 The Setxpand Authors.
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

#include "setxpand/units.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "setxpand/random.h"
#include "test_util.h"

namespace setxpand {
namespace {

using testing::Bracketed;
using testing::EncodedFixture;

TEST(UnitsTest, ChunksBecomeTermUnits) {
  EncodedFixture f({Bracketed("[Siri] uses [voice queries]")});
  const UnitSequence &seq = f.sequences()[0];
  ASSERT_EQ(seq.units.size(), 3u);
  EXPECT_TRUE(seq.units[0].is_term());
  EXPECT_FALSE(seq.units[1].is_term());
  EXPECT_TRUE(seq.units[2].is_term());
  EXPECT_EQ(f.renderer().Render(seq.units[0]), "Siri");
  EXPECT_EQ(f.renderer().Render(seq.units[1]), "uses");
  EXPECT_EQ(f.renderer().Render(seq.units[2]), "voice queries");
  EXPECT_EQ(seq.token_unit, (std::vector<int32_t>{0, 1, 2, 2}));
}

TEST(UnitsTest, VariationsShareOneUnit) {
  EncodedFixture f({Bracketed("[New York] is big"), Bracketed("I like [New-York]"),
                    Bracketed("[NY] again")});
  EXPECT_EQ(f.sequences()[0].units[0], f.sequences()[1].units[2]);
  EXPECT_EQ(f.sequences()[0].units[0], f.sequences()[2].units[0]);
}

TEST(UnitsTest, SentenceWithoutChunksKeepsWords) {
  EncodedFixture f({Bracketed("nothing to see here")});
  ASSERT_EQ(f.sequences()[0].units.size(), 4u);
  for (const Unit &u : f.sequences()[0].units) EXPECT_FALSE(u.is_term());
}

TEST(UnitsTest, UnseenChunkBecomesSingleton) {
  TermGroupTable groups;
  WordVocab words;
  UnitEncoder encoder(&groups, &words);
  const UnitSequence seq = encoder.Encode(Bracketed("[Fresh Term] arrives"));
  EXPECT_EQ(groups.size(), 1);
  EXPECT_EQ(groups.group(seq.units[0].id).canonical, "Fresh Term");
}

TEST(UnitsTest, LengthLaw) {
  Rng rng(8);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "eps"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    size_t tokens = 0, chunk_tokens = 0, chunks = 0;
    for (size_t n = 1 + rng.Below(12); n > 0; --n) {
      if (rng.Below(3) == 0) {
        const size_t len = 1 + rng.Below(3);
        text += "[";
        for (size_t i = 0; i < len; ++i) {
          text += words[rng.Below(words.size())] + (i + 1 < len ? " " : "] ");
        }
        tokens += len;
        chunk_tokens += len;
        ++chunks;
      } else {
        text += words[rng.Below(words.size())] + " ";
        ++tokens;
      }
    }
    EncodedFixture f({Bracketed(text)});
    EXPECT_EQ(f.sequences()[0].units.size(), tokens - chunk_tokens + chunks) << text;
  }
}

TEST(UnitsTest, PackRoundTrip) {
  for (Unit u : {Unit::Term(0), Unit::Word(7), Unit::Term(2147483647)}) {
    EXPECT_EQ(Unit::Unpack(u.Pack()), u);
  }
  EXPECT_NE(Unit::Term(3).Pack(), Unit::Word(3).Pack());
}

}  // namespace
}  // namespace setxpand
