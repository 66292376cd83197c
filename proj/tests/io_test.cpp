// Copyright 2026 The otsg Authors
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

#include "otsg/io.hpp"

#include <cstdlib>
#include <filesystem>

#include "gtest/gtest.h"
#include "otsg/rng.hpp"

namespace {
using namespace otsg;

TEST(FmtDouble, RoundTripsExactly) {
  CounterRng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double v = (rng.next_unit() - 0.5) * std::pow(10.0, i % 20 - 10);
    const std::string s = fmt_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(fmt_double(0.0), "0");
  EXPECT_EQ(fmt_double(1.0), "1");
  EXPECT_EQ(fmt_double(0.5), "0.5");
}

TEST(JsonWriter, FlatDocument) {
  JsonWriter w;
  w.begin_object();
  w.key("name").value("a\"b");
  w.key("x").value(0.25);
  w.key("list").array({1.0, 2.0});
  w.key("nested").begin_object();
  w.key("k").value_raw("7");
  w.end_object();
  w.end_object();
  EXPECT_EQ(w.str(),
            "{\"name\":\"a\\\"b\",\"x\":0.25,\"list\":[1,2],"
            "\"nested\":{\"k\":7}}");
}

TEST(ReadCsv, HeaderDetectionAndErrors) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "otsg_io_test.csv").string();

  write_text_file(path, "a,b\n1,2\n3,4\n");
  const auto with_header = read_csv(path);
  ASSERT_EQ(with_header.header.size(), 2u);
  EXPECT_EQ(with_header.column_index("b"), 1u);
  EXPECT_THROW(with_header.column_index("c"), DataError);
  ASSERT_EQ(with_header.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(with_header.rows[1][0], 3.0);

  write_text_file(path, "1,2\n3,4\n");
  EXPECT_TRUE(read_csv(path).header.empty());

  write_text_file(path, "1\nx\n");
  try {
    read_csv(path);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column 1"), std::string::npos);
  }

  write_text_file(path, "1,2\n3\n");
  EXPECT_THROW(read_csv(path), DataError);
  EXPECT_THROW(read_csv("/no/such/file.csv"), DataError);
  std::filesystem::remove(path);
}

}  // namespace
