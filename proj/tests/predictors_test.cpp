// Copyright 2026 The docstruct Authors.
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

#include "docstruct/predictors.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "docstruct/remote_predictor.hpp"
#include "docstruct/selfcheck.hpp"
#include "docstruct/structure.hpp"

namespace docstruct {
namespace {

PredictionRequest request(std::size_t step, std::size_t expected, std::string prompt = {}) {
  PredictionRequest r;
  r.step = step;
  r.expected_actions = expected;
  r.prompt = std::move(prompt);
  return r;
}

TEST(OraclePredictorTest, SlicesByStep) {
  OraclePredictor o({Action::heading(1), Action::paragraph(), Action::concatenation()}, 2);
  EXPECT_EQ(o.predict(request(0, 2)).action_lines, "+\n*\n");
  EXPECT_EQ(o.predict(request(1, 1)).action_lines, "=\n");
  EXPECT_EQ(o.predict(request(1, 1)).action_lines, "=\n");
  EXPECT_THROW(o.predict(request(2, 1)), CursorExhausted);
  EXPECT_THROW(o.predict(request(1, 2)), CursorExhausted);
}

TEST(OraclePredictorTest, WorkedExampleStep) {
  const auto ex = selfcheck::worked_example();
  std::vector<Action> gold{Action::heading(1), Action::heading(2), Action::heading(3),
                           Action::paragraph()};
  gold.insert(gold.end(), ex.gold.begin(), ex.gold.end());
  OraclePredictor o(gold, 1);
  EXPECT_EQ(o.predict(request(4, 3, selfcheck::worked_example_prompt())).action_lines,
            "=\n+++\n*\n");
}

std::string prompt_for(const EngineState& s, std::vector<std::string> lines) {
  std::vector<TextSegment> segs;
  for (auto& l : lines) segs.push_back({"d", segs.size(), std::move(l)});
  return render_prompt(s.stack, s.tree, segs, {});
}

TEST(HeuristicPredictorTest, NumberedHeadingUnderDeepStack) {
  EngineState s;
  for (int level = 1; level <= 4; ++level) {
    apply_action_in_place(s, Action::heading(level), {"d", 0, "x"});
  }
  HeuristicPredictor h;
  const auto out = h.predict(request(
      0, 1,
      prompt_for(s, {"Chapter 3 Basis and Scope for Determining the Holders of Employee "
                     "Stock Ownership Plans"})));
  EXPECT_EQ(parse_action_block(out.action_lines, 1), std::vector<Action>{Action::heading(1)});
}

TEST(HeuristicPredictorTest, ContinuationAndFallback) {
  const auto ex = selfcheck::worked_example();
  HeuristicPredictor h;
  EXPECT_EQ(h.predict(request(0, 1, prompt_for(ex.state,
                                               {"forestry, water resources and social "
                                                "services."})))
                .action_lines,
            "=\n");

  EngineState done;
  apply_action_in_place(done, Action::paragraph(), {"d", 0, "A finished sentence."});
  EXPECT_EQ(h.predict(request(0, 1, prompt_for(done, {"lorem ipsum."}))).action_lines, "*\n");
  EXPECT_EQ(h.predict(request(0, 1, prompt_for(EngineState{}, {"lorem ipsum"}))).action_lines,
            "*\n");
}

TEST(HeuristicPredictorTest, LevelsFromNumbering) {
  HeuristicPredictor h;
  const auto out = h.predict(request(
      0, 6,
      prompt_for(EngineState{}, {"Chapter 1 Scope", "1.1 Terms", "1.1.1 Detail",
                                 "text without end", "continued.", "1.2 Next"})));
  EXPECT_EQ(out.action_lines, "+\n++\n+++\n*\n=\n++\n");

  // Deep numbering is clamped to one below the current deepest heading.
  EXPECT_EQ(h.predict(request(0, 1, prompt_for(EngineState{}, {"2.3.4 Deep"}))).action_lines,
            "+\n");

  // Parenthesized numerals nest under the current heading, and siblings
  // reuse the level of the first one.
  EngineState s;
  apply_action_in_place(s, Action::heading(1), {"d", 0, "Chapter 1 A"});
  EXPECT_EQ(h.predict(request(0, 3, prompt_for(s, {"(1) first", "body.", "(2) second"})))
                .action_lines,
            "++\n*\n++\n");
}

TEST(HeuristicPredictorTest, PunctuationSet) {
  for (const char* s : {"a.", "a!", "a?", "a:", "a;", "a\xE3\x80\x82", "a\xEF\xBC\x81",
                        "a\xEF\xBC\x9F", "a.  "}) {
    EXPECT_TRUE(ends_sentence(s)) << s;
  }
  for (const char* s : {"a,", "a", "", "a\xEF\xBC\x8C"}) EXPECT_FALSE(ends_sentence(s)) << s;
}

// Minimal generation service on an ephemeral port.
class StubServer {
 public:
  explicit StubServer(httplib::Server::Handler handler) {
    server_.Post("/generate", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  RemoteConfig config() const {
    RemoteConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_);
    c.initial_backoff_ms = 5;
    c.timeout_ms = 2000;
    return c;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(RemotePredictorTest, ForwardsTextVerbatim) {
  std::string seen;
  StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
    seen = req.body;
    res.set_content(R"({"text":"*\n"})", "application/json");
  });
  RemotePredictor p(stub.config());
  EXPECT_EQ(p.predict(request(0, 1, "P")).action_lines, "*\n");
  const auto body = nlohmann::json::parse(seen);
  EXPECT_EQ(body["prompt"], "P");
  EXPECT_EQ(body["max_new_tokens"], 8);
  EXPECT_EQ(body["stop"], nlohmann::json::array({"###"}));
}

TEST(RemotePredictorTest, RetriesServerErrors) {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 503;
  });
  RemotePredictor p(stub.config());
  try {
    p.predict(request(0, 1));
    FAIL();
  } catch (const PredictorError& e) {
    EXPECT_EQ(e.attempts(), 3);
    EXPECT_EQ(e.status(), 503);
  }
  EXPECT_EQ(calls.load(), 3);
}

TEST(RemotePredictorTest, RetriesTimeouts) {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    res.set_content(R"({"text":"*\n"})", "application/json");
  });
  auto cfg = stub.config();
  cfg.timeout_ms = 100;
  RemotePredictor p(cfg);
  try {
    p.predict(request(0, 1));
    FAIL();
  } catch (const PredictorError& e) {
    EXPECT_EQ(e.attempts(), 3);
  }
  EXPECT_EQ(calls.load(), 3);
}

TEST(RemotePredictorTest, ClientErrorsAreNotRetried) {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
  });
  RemotePredictor p(stub.config());
  try {
    p.predict(request(0, 1));
    FAIL();
  } catch (const PredictorError& e) {
    EXPECT_EQ(e.attempts(), 1);
    EXPECT_EQ(e.status(), 400);
  }
  EXPECT_EQ(calls.load(), 1);
}

TEST(RemotePredictorTest, ShortAnswerBecomesSkip) {
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"text":"*\n*\n"})", "application/json");
  });
  RemotePredictor p(stub.config());
  const std::vector<TextSegment> segs{{"d", 0, "a"}, {"d", 1, "b"}, {"d", 2, "c"}};
  const auto r = structure_document(segs, p, window_config(3, 3), {});
  EXPECT_EQ(r.report.skipped_segment_indices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(r.tree.size(), 1u);
}

TEST(RemotePredictorTest, BearerToken) {
  std::string auth;
  StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"text":"*\n"})", "application/json");
  });
  auto cfg = stub.config();
  cfg.api_key = "k";
  RemotePredictor(cfg).predict(request(0, 1));
  EXPECT_EQ(auth, "Bearer k");
}

}  // namespace
}  // namespace docstruct
