#pragma once

#include <string>

#include "flowspace/flows.hpp"
#include "json.hpp"

namespace flowspace {

// Order-preserving JSON throughout, so serialized reports are reproducible
// byte for byte.
using Json = nlohmann::ordered_json;

// Flow description: {"states":[...], "paths":[{"id","src","tgt"}],
// "compose":[[p,q,r],...]} with an optional boolean "truncated". States in
// "src"/"tgt" and entries of the compose triples may be given by name or by
// index. Every violation is reported as InputError with a witness; the
// assembled flow passes full validation (totality, endpoints,
// associativity).
DiscreteFlow flow_from_json(const Json& j);
Json flow_to_json(const DiscreteFlow& a);

// Attachment description: {"g0","g1","boundary":[...],"cells":[...],
// "attach":{...},"incl":{...}} where attach maps boundary names to paths of
// the base flow and incl maps them to cell names.
GlobAttachment attachment_from_json(const DiscreteFlow& a, const Json& j);
Json attachment_to_json(const DiscreteFlow& a, const GlobAttachment& att);

// File loaders; parse errors and unreadable files become InputError.
Json load_json_file(const std::string& path);
DiscreteFlow load_flow(const std::string& path);
GlobAttachment load_attachment(const DiscreteFlow& a, const std::string& path);

}  // namespace flowspace
