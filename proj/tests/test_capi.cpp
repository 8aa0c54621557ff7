#include <string>

#include "doctest.h"
#include "flowspace/flowspace.h"
#include "json.hpp"

namespace {

// Takes ownership of a C string and frees it on scope exit.
struct Owned {
  char* ptr = nullptr;
  ~Owned() { fs_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

constexpr const char* kGlobFlow = R"({
  "states": ["x", "y"],
  "paths": [{"id": "u", "src": "x", "tgt": "y"}],
  "compose": []
})";

constexpr const char* kOneCell = R"({
  "g0": "x", "g1": "y",
  "boundary": [], "cells": ["z"],
  "attach": {}, "incl": {}
})";

constexpr const char* kCyclicFlow = R"({
  "states": ["x", "y"],
  "paths": [{"id": "p", "src": "y", "tgt": "x"}],
  "compose": []
})";

}  // namespace

TEST_CASE("version string and null frees are safe") {
  REQUIRE(fs_version() != nullptr);
  CHECK(std::string(fs_version()).find("flowspace") != std::string::npos);
  fs_string_free(nullptr);
  fs_flow_free(nullptr);
  fs_attachment_free(nullptr);
}

TEST_CASE("flow parsing validates and reports through the error slot") {
  fs_flow* flow = nullptr;
  Owned err;
  CHECK(fs_flow_parse(kGlobFlow, &flow, &err.ptr) == FS_OK);
  REQUIRE(flow != nullptr);
  CHECK(err.ptr == nullptr);
  fs_flow_free(flow);

  flow = nullptr;
  CHECK(fs_flow_parse("not json", &flow, &err.ptr) == FS_ERR_INPUT);
  CHECK(flow == nullptr);
  CHECK(err.str() != "");

  // Structurally valid JSON with a broken law: missing composite.
  Owned err2;
  const char* partial = R"({
    "states": ["x", "y", "z"],
    "paths": [{"id": "f", "src": "x", "tgt": "y"}, {"id": "g", "src": "y", "tgt": "z"}],
    "compose": []
  })";
  CHECK(fs_flow_parse(partial, &flow, &err2.ptr) == FS_ERR_INPUT);
  CHECK(err2.str().find("missing composite") != std::string::npos);
}

TEST_CASE("attachment parsing checks the boundary image") {
  fs_flow* flow = nullptr;
  REQUIRE(fs_flow_parse(kGlobFlow, &flow, nullptr) == FS_OK);

  fs_attachment* att = nullptr;
  CHECK(fs_attachment_parse(flow, kOneCell, &att, nullptr) == FS_OK);
  REQUIRE(att != nullptr);
  fs_attachment_free(att);

  // u runs x -> y, but the attachment marks (y, x): attach cannot land there.
  att = nullptr;
  Owned err;
  const char* wrongEnds = R"({
    "g0": "y", "g1": "x",
    "boundary": ["b"], "cells": ["z"],
    "attach": {"b": "u"}, "incl": {"b": "z"}
  })";
  CHECK(fs_attachment_parse(flow, wrongEnds, &att, &err.ptr) == FS_ERR_INPUT);
  CHECK(att == nullptr);
  CHECK(err.str() != "");
  fs_flow_free(flow);
}

TEST_CASE("enumerate lists the truncation or rejects the context") {
  Owned out, err;
  REQUIRE(fs_enumerate("a", "a", "a", 2, 0, &out.ptr, &err.ptr) == FS_OK);
  std::string text = out.str();
  int rows = 0;
  for (char c : text) rows += c == '\n';
  CHECK(rows == 3);
  CHECK(text.find("latch_base=") != std::string::npos);

  Owned dotOut;
  REQUIRE(fs_enumerate("a,b", "a", "b", 2, 1, &dotOut.ptr, nullptr) == FS_OK);
  CHECK(dotOut.str().substr(0, 7) == "digraph");

  Owned err2;
  char* none = nullptr;
  CHECK(fs_enumerate("a,,b", "a", "b", 1, 0, &none, &err2.ptr) == FS_ERR_INPUT);
  CHECK(none == nullptr);
  Owned err3;
  CHECK(fs_enumerate("a", "a", "a", 0, 0, &none, &err3.ptr) == FS_ERR_INPUT);
  CHECK(fs_enumerate("a", "a", "missing", 1, 0, &none, nullptr) == FS_ERR_INPUT);
}

TEST_CASE("pushout reports carry verdicts and map failures to status codes") {
  fs_flow* flow = nullptr;
  fs_attachment* att = nullptr;
  REQUIRE(fs_flow_parse(kGlobFlow, &flow, nullptr) == FS_OK);
  REQUIRE(fs_attachment_parse(flow, kOneCell, &att, nullptr) == FS_OK);

  Owned report;
  REQUIRE(fs_pushout_report(flow, att, "both", -1, &report.ptr, nullptr) == FS_OK);
  nlohmann::json r = nlohmann::json::parse(report.str());
  CHECK(r["schema"] == "flowspace-report/1");
  CHECK(r["kind"] == "pushout");
  CHECK(r["verdict"] == "Pass");
  CHECK(r["results"]["oracle"]["blocks"]["(0,1)"] == 2);
  CHECK(r["results"]["reedy"]["blocks"]["(0,1)"] == 2);
  CHECK(r["results"]["iso"].size() == 2);

  Owned err;
  char* none = nullptr;
  CHECK(fs_pushout_report(flow, att, "sideways", -1, &none, &err.ptr) == FS_ERR_INPUT);
  Owned err2;
  CHECK(fs_pushout_report(flow, att, "both", 5, &none, &err2.ptr) == FS_ERR_INPUT);
  CHECK(err2.str().find("cap") != std::string::npos);
  fs_attachment_free(att);
  fs_flow_free(flow);

  // A cell closing a cycle: the uncapped oracle refuses, the capped one
  // reports a truncated flow.
  fs_flow* cyclic = nullptr;
  fs_attachment* loop = nullptr;
  REQUIRE(fs_flow_parse(kCyclicFlow, &cyclic, nullptr) == FS_OK);
  REQUIRE(fs_attachment_parse(cyclic, kOneCell, &loop, nullptr) == FS_OK);
  Owned err3;
  CHECK(fs_pushout_report(cyclic, loop, "oracle", -1, &none, &err3.ptr) == FS_ERR_PRECONDITION);
  CHECK(none == nullptr);
  Owned capped;
  REQUIRE(fs_pushout_report(cyclic, loop, "oracle", 4, &capped.ptr, nullptr) == FS_OK);
  nlohmann::json c = nlohmann::json::parse(capped.str());
  CHECK(c["results"]["oracle"]["truncated"] == true);
  fs_attachment_free(loop);
  fs_flow_free(cyclic);
}

TEST_CASE("verify reports are byte-identical across runs of one seed") {
  Owned first, second;
  REQUIRE(fs_verify_report("moore", 5, 5, &first.ptr, nullptr) == FS_OK);
  REQUIRE(fs_verify_report("moore", 5, 5, &second.ptr, nullptr) == FS_OK);
  CHECK(first.str() == second.str());
  nlohmann::json r = nlohmann::json::parse(first.str());
  CHECK(r["failures"] == 0);
  CHECK(r["suite"] == "moore");

  Owned err;
  char* none = nullptr;
  CHECK(fs_verify_report("bogus", 0, 1, &none, &err.ptr) == FS_ERR_INPUT);
  CHECK(none == nullptr);
  CHECK(err.str().find("bogus") != std::string::npos);
}
