// Command-line front end over the public C surface. All computation lives
// behind flowspace.h; this file only parses arguments, loads files and moves
// strings between the library and the standard streams.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "flowspace/flowspace.h"

namespace {

// Owns a library-allocated string for the duration of a scope.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { fs_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

int report_error(const char* context, const OwnedString& err, fs_status status) {
  std::cerr << "error: " << context << ": " << (err.ptr ? err.ptr : "unknown failure") << "\n";
  return status;
}

// For calls whose messages already name the failing command.
int report_error(const OwnedString& err, fs_status status) {
  std::cerr << "error: " << (err.ptr ? err.ptr : "unknown failure") << "\n";
  return status;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

struct FlowHandle {
  fs_flow* ptr = nullptr;
  ~FlowHandle() { fs_flow_free(ptr); }
};

struct AttachmentHandle {
  fs_attachment* ptr = nullptr;
  ~AttachmentHandle() { fs_attachment_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowspace: finite flows, glued cells and their path spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(fs_version()); });

  // enumerate
  std::string states, u, v;
  int maxDegree = 1;
  bool dot = false;
  CLI::App* enumerateCmd =
      app.add_subcommand("enumerate", "List the tuple objects of a degree-capped truncation");
  enumerateCmd->add_option("--states", states, "Comma-separated state names")->required();
  enumerateCmd->add_option("--u", u, "Marked source state")->required();
  enumerateCmd->add_option("--v", v, "Marked target state")->required();
  enumerateCmd->add_option("--max-degree", maxDegree, "Degree bound (>= 1)")->required();
  enumerateCmd->add_flag("--dot", dot, "Emit the cover relation as a DOT digraph");

  // pushout
  std::string flowFile, attachFile, method = "both";
  int cap = -1;
  CLI::App* pushoutCmd =
      app.add_subcommand("pushout", "Glue attached cells onto a flow and report the result");
  pushoutCmd->add_option("flow", flowFile, "Flow description (JSON file)")->required();
  pushoutCmd->add_option("attachment", attachFile, "Attachment description (JSON file)")
      ->required();
  pushoutCmd->add_option("--method", method, "oracle, reedy or both (default both)");
  pushoutCmd->add_option("--cap", cap, "Word-length cap for the oracle method");

  // verify
  std::string suite = "all";
  std::uint64_t seed = 0;
  int count = 100;
  CLI::App* verifyCmd =
      app.add_subcommand("verify", "Run the randomized law checks and print the JSON report");
  verifyCmd->add_option("--suite", suite, "poset, diagrams, pushout, moore or all (default all)");
  verifyCmd->add_option("--seed", seed, "Seed for the instance streams (default 0)");
  verifyCmd->add_option("--count", count, "Iterations per check (default 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? FS_ERR_INPUT : FS_OK;
  }

  auto started = std::chrono::steady_clock::now();
  auto wallMs = [&]() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - started)
        .count();
  };

  if (enumerateCmd->parsed()) {
    OwnedString out, err;
    fs_status st = fs_enumerate(states.c_str(), u.c_str(), v.c_str(), maxDegree, dot ? 1 : 0,
                                &out.ptr, &err.ptr);
    if (st != FS_OK) return report_error("enumerate", err, st);
    std::cout << out.str();
    std::cerr << "wall time: " << wallMs() << " ms\n";
    return FS_OK;
  }

  if (pushoutCmd->parsed()) {
    std::string flowText, attachText;
    if (!read_file(flowFile, flowText)) {
      std::cerr << "error: pushout: cannot read " << flowFile << "\n";
      return FS_ERR_INPUT;
    }
    if (!read_file(attachFile, attachText)) {
      std::cerr << "error: pushout: cannot read " << attachFile << "\n";
      return FS_ERR_INPUT;
    }
    FlowHandle flow;
    AttachmentHandle att;
    OwnedString err;
    fs_status st = fs_flow_parse(flowText.c_str(), &flow.ptr, &err.ptr);
    if (st != FS_OK) return report_error(flowFile.c_str(), err, st);
    st = fs_attachment_parse(flow.ptr, attachText.c_str(), &att.ptr, &err.ptr);
    if (st != FS_OK) return report_error(attachFile.c_str(), err, st);
    OwnedString report;
    st = fs_pushout_report(flow.ptr, att.ptr, method.c_str(), cap, &report.ptr, &err.ptr);
    if (st != FS_OK && st != FS_FAIL) return report_error(err, st);
    std::cout << report.str();
    std::cerr << "wall time: " << wallMs() << " ms\n";
    return st;
  }

  // verify
  if (const char* envSeed = std::getenv("FLOWSPACE_SEED")) {
    try {
      seed = std::stoull(envSeed);
    } catch (const std::exception&) {
      std::cerr << "error: verify: FLOWSPACE_SEED is not a number: " << envSeed << "\n";
      return FS_ERR_INPUT;
    }
  }
  OwnedString report, err;
  fs_status st = fs_verify_report(suite.c_str(), seed, count, &report.ptr, &err.ptr);
  if (st != FS_OK && st != FS_FAIL) return report_error(err, st);
  std::cout << report.str();
  std::cerr << "wall time: " << wallMs() << " ms\n";
  return st;
}
