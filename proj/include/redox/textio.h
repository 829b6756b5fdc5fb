#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "redox/cluster.h"
#include "redox/layout.h"

namespace redox {

// Line-oriented text formats for cross-implementation diffing:
//   layout:   "redox-layout v1 F K M N P seed" then "file_id pc vc offset home size"
//   trace:    "redox-trace v1 F N epoch_seed"  then "sn requester file_id"
//   delivery: "redox-delivery v1 F"            then "sn requested_file returned_file"

void write_layout_text(std::ostream& out, const Layout& layout);
Layout read_layout_text(std::istream& in);

void write_trace_text(std::ostream& out, const Layout& layout, const EpochTrace& trace);
EpochTrace read_trace_text(std::istream& in, const Layout& layout);

void write_delivery_text(std::ostream& out, uint64_t files,
                         const std::vector<DeliveryRecord>& log);
std::vector<DeliveryRecord> read_delivery_text(std::istream& in);

enum class TraceFileKind { layout, trace, delivery };
TraceFileKind detect_kind(const std::string& header_line);

std::string layout_to_string(const Layout& layout);
std::string delivery_to_string(uint64_t files, const std::vector<DeliveryRecord>& log);

}  // namespace redox
