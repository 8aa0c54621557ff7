#include "flowspace/flowspace.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flowspace/flows.hpp"
#include "flowspace/json_io.hpp"
#include "flowspace/pathspace.hpp"
#include "flowspace/reedy.hpp"
#include "flowspace/verify.hpp"

using namespace flowspace;

// Opaque handle bodies: plain wrappers around the C++ values.
struct fs_flow {
  DiscreteFlow value;
};

struct fs_attachment {
  GlobAttachment value;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

// Runs the body and translates exceptions into status codes; nothing may
// cross the C boundary.
template <typename Fn>
fs_status guarded(char** err, Fn&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    set_err(err, e.what());
    return FS_ERR_INPUT;
  } catch (const PreconditionError& e) {
    set_err(err, e.what());
    return FS_ERR_PRECONDITION;
  } catch (const std::exception& e) {
    set_err(err, e.what());
    return FS_ERR_INPUT;
  }
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Path counts per endpoint pair, keyed "(src,tgt)" by state index.
Json block_counts(const DiscreteFlow& f) {
  std::map<std::pair<int, int>, int> counts;
  for (const FlowPath& p : f.paths) ++counts[{p.src, p.tgt}];
  Json out = Json::object();
  for (const auto& [key, n] : counts) {
    out["(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")"] = n;
  }
  return out;
}

Json flow_summary(const DiscreteFlow& f) {
  Json out;
  out["paths"] = f.npaths();
  out["truncated"] = f.truncated;
  out["blocks"] = block_counts(f);
  return out;
}

Json check_entry(const std::string& name, const std::string& verdict, const std::string& detail) {
  Json c;
  c["name"] = name;
  c["verdict"] = verdict;
  if (verdict == "Fail") c["witness"] = detail;
  if (verdict == "Skipped") c["reason"] = detail;
  return c;
}

}  // namespace

extern "C" {

const char* fs_version(void) { return "flowspace 0.1.0"; }

void fs_string_free(char* s) { std::free(s); }

fs_status fs_flow_parse(const char* json_text, fs_flow** out, char** err) {
  return guarded(err, [&]() -> fs_status {
    if (!json_text || !out) throw InputError("flow text and output handle are required");
    DiscreteFlow f = flow_from_json(Json::parse(json_text));
    *out = new fs_flow{std::move(f)};
    return FS_OK;
  });
}

void fs_flow_free(fs_flow* flow) { delete flow; }

fs_status fs_attachment_parse(const fs_flow* flow, const char* json_text, fs_attachment** out,
                              char** err) {
  return guarded(err, [&]() -> fs_status {
    if (!flow || !json_text || !out) {
      throw InputError("flow handle, attachment text and output handle are required");
    }
    GlobAttachment a = attachment_from_json(flow->value, Json::parse(json_text));
    *out = new fs_attachment{std::move(a)};
    return FS_OK;
  });
}

void fs_attachment_free(fs_attachment* att) { delete att; }

fs_status fs_enumerate(const char* states_csv, const char* u, const char* v, int max_degree,
                       int dot, char** out, char** err) {
  return guarded(err, [&]() -> fs_status {
    if (!states_csv || !u || !v || !out) {
      throw InputError("states, u, v and the output slot are required");
    }
    if (max_degree < 1) throw InputError("max degree must be at least 1");
    PosetContext ctx(split_csv(states_csv), u, v);
    Enumeration en = enumerate_up_to(ctx, max_degree);
    std::ostringstream os;
    if (dot) {
      auto escape = [](const std::string& s) {
        std::string t;
        for (char c : s) {
          if (c == '"' || c == '\\') t += '\\';
          t += c;
        }
        return t;
      };
      os << "digraph truncation {\n  rankdir=BT;\n  node [shape=box];\n";
      for (size_t i = 0; i < en.objects.size(); ++i) {
        os << "  n" << i << " [label=\"" << escape(format_tuple(ctx, en.objects[i])) << "\"];\n";
      }
      for (const auto& [from, to] : en.covers) {
        os << "  n" << from << " -> n" << to << ";\n";
      }
      os << "}\n";
    } else {
      for (const TupleObject& t : en.objects) {
        os << format_tuple(ctx, t) << "\tdegree=" << t.degree() << "\theight=" << t.height()
           << "\tsimplify=" << format_tuple(ctx, simplify(ctx, t))
           << "\tlatch_base=" << format_tuple(ctx, latch_base(ctx, t)) << "\n";
      }
    }
    *out = dup_string(os.str());
    return FS_OK;
  });
}

fs_status fs_pushout_report(const fs_flow* flow, const fs_attachment* att, const char* method,
                            int cap, char** report_out, char** err) {
  return guarded(err, [&]() -> fs_status {
    if (!flow || !att || !method || !report_out) {
      throw InputError("flow, attachment, method and the report slot are required");
    }
    std::string m = method;
    if (m != "oracle" && m != "reedy" && m != "both") {
      throw InputError("pushout: unknown method '" + m + "'");
    }
    if (cap >= 0 && m != "oracle") {
      throw InputError("pushout: a word cap applies to the oracle method only");
    }
    const DiscreteFlow& a = flow->value;
    const GlobAttachment& g = att->value;

    Json report;
    report["schema"] = "flowspace-report/1";
    report["kind"] = "pushout";
    report["method"] = m;
    Json inst;
    inst["states"] = a.nstates();
    inst["paths"] = a.npaths();
    inst["cells"] = g.cells.size();
    inst["boundary"] = g.boundary.size();
    inst["g0"] = a.states[g.g0];
    inst["g1"] = a.states[g.g1];
    report["instance"] = inst;

    Json checks = Json::array();
    Json results = Json::object();
    bool failed = false;
    if (m == "oracle") {
      GlobPushout po =
          pushout_glob_oracle(a, g, cap < 0 ? std::nullopt : std::optional<int>(cap));
      results["oracle"] = flow_summary(po.flow);
      checks.push_back(check_entry("oracle construction", "Pass", ""));
      checks.push_back(check_entry("comparison", "Skipped", "method oracle runs one construction"));
    } else if (m == "reedy") {
      ReedyPathspace rp = pathspace_via_reedy(a, g);
      results["reedy"] = flow_summary(rp.flow);
      checks.push_back(check_entry("reedy construction", "Pass", ""));
      checks.push_back(check_entry("comparison", "Skipped", "method reedy runs one construction"));
    } else {
      CompareResult cmp = compare_with_oracle(a, g);
      results["oracle"] = flow_summary(cmp.oracle.flow);
      results["reedy"] = flow_summary(cmp.reedy.flow);
      checks.push_back(check_entry("oracle construction", "Pass", ""));
      checks.push_back(check_entry("reedy construction", "Pass", ""));
      if (cmp.ok) {
        checks.push_back(check_entry("comparison", "Pass", ""));
        Json iso = Json::array();
        for (int p = 0; p < cmp.oracle.flow.npaths(); ++p) {
          Json row;
          row["oracle"] = cmp.oracle.flow.paths[p].id;
          row["reedy"] = cmp.reedy.flow.paths[cmp.iso.pathMap[p]].id;
          iso.push_back(std::move(row));
        }
        results["iso"] = std::move(iso);
      } else {
        checks.push_back(check_entry("comparison", "Fail", cmp.message));
        failed = true;
      }
    }
    report["results"] = std::move(results);
    report["checks"] = std::move(checks);
    report["verdict"] = failed ? "Fail" : "Pass";
    *report_out = dup_string(report.dump(2) + "\n");
    return failed ? FS_FAIL : FS_OK;
  });
}

fs_status fs_verify_report(const char* suite, uint64_t seed, int count, char** report_out,
                           char** err) {
  return guarded(err, [&]() -> fs_status {
    if (!suite || !report_out) throw InputError("suite and the report slot are required");
    SuiteResult r = run_suite(suite, seed, count);
    *report_out = dup_string(r.report.dump(2) + "\n");
    return r.failures == 0 ? FS_OK : FS_FAIL;
  });
}

}  // extern "C"
