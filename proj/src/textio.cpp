#include "redox/textio.h"

#include <istream>
#include <ostream>
#include <sstream>

#include "redox/error.h"

namespace redox {

namespace {

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(std::string("truncated file: expected ") + what);
  return line;
}

}  // namespace

void write_layout_text(std::ostream& out, const Layout& layout) {
  const auto& cfg = layout.config();
  out << "redox-layout v1 " << cfg.files << ' ' << cfg.chunk_size << ' '
      << cfg.virtual_chunks << ' ' << cfg.nodes << ' ' << cfg.prefetch_window << ' '
      << cfg.layout_seed << '\n';
  for (uint64_t fid = 0; fid < cfg.files; ++fid) {
    const FileSlot slot = layout.slot_of(fid);
    out << fid << ' ' << layout.pc_of(fid) << ' ' << slot.vc << ' ' << slot.offset << ' '
        << slot.home << ' ' << layout.size_of(fid) << '\n';
  }
}

Layout read_layout_text(std::istream& in) {
  std::istringstream header(next_line(in, "layout header"));
  std::string tag, version;
  LayoutConfig cfg;
  header >> tag >> version >> cfg.files >> cfg.chunk_size >> cfg.virtual_chunks >>
      cfg.nodes >> cfg.prefetch_window >> cfg.layout_seed;
  if (!header || tag != "redox-layout" || version != "v1")
    throw IoError("not a redox-layout v1 file");

  std::vector<uint64_t> sizes(cfg.files, 0);
  struct Row {
    uint64_t pc, vc, offset, home;
  };
  std::vector<Row> rows(cfg.files);
  for (uint64_t i = 0; i < cfg.files; ++i) {
    std::istringstream line(next_line(in, "layout row"));
    uint64_t fid;
    Row row{};
    uint64_t size;
    line >> fid >> row.pc >> row.vc >> row.offset >> row.home >> size;
    if (!line || fid != i) throw IoError("malformed layout row " + std::to_string(i));
    rows[i] = row;
    sizes[i] = size;
  }

  Layout layout = build_layout(cfg, std::move(sizes));
  for (uint64_t fid = 0; fid < cfg.files; ++fid) {
    const FileSlot slot = layout.slot_of(fid);
    if (rows[fid].pc != layout.pc_of(fid) || rows[fid].vc != slot.vc ||
        rows[fid].offset != slot.offset || rows[fid].home != slot.home)
      throw IoError("layout file row " + std::to_string(fid) +
                    " disagrees with the mapping derived from its header");
  }
  return layout;
}

void write_trace_text(std::ostream& out, const Layout& layout, const EpochTrace& trace) {
  out << "redox-trace v1 " << layout.files() << ' ' << layout.config().nodes << ' '
      << trace.epoch_seed << '\n';
  for (uint64_t sn = 0; sn < trace.size(); ++sn)
    out << sn << ' ' << trace.requester[sn] << ' ' << trace.order[sn] << '\n';
}

EpochTrace read_trace_text(std::istream& in, const Layout& layout) {
  std::istringstream header(next_line(in, "trace header"));
  std::string tag, version;
  uint64_t files, nodes, epoch_seed;
  header >> tag >> version >> files >> nodes >> epoch_seed;
  if (!header || tag != "redox-trace" || version != "v1")
    throw IoError("not a redox-trace v1 file");
  if (files != layout.files() || nodes != layout.config().nodes)
    throw IoError("trace header does not match the layout");

  std::vector<uint64_t> order(files);
  for (uint64_t i = 0; i < files; ++i) {
    std::istringstream line(next_line(in, "trace row"));
    uint64_t sn, requester, fid;
    line >> sn >> requester >> fid;
    if (!line || sn != i) throw IoError("malformed trace row " + std::to_string(i));
    if (requester != sn % nodes) throw IoError("trace requester is not round-robin");
    order[i] = fid;
  }
  return make_epoch_trace(layout, std::move(order), epoch_seed);
}

void write_delivery_text(std::ostream& out, uint64_t files,
                         const std::vector<DeliveryRecord>& log) {
  out << "redox-delivery v1 " << files << '\n';
  for (const auto& rec : log)
    out << rec.sn << ' ' << rec.requested << ' ' << rec.returned << '\n';
}

std::vector<DeliveryRecord> read_delivery_text(std::istream& in) {
  std::istringstream header(next_line(in, "delivery header"));
  std::string tag, version;
  uint64_t files;
  header >> tag >> version >> files;
  if (!header || tag != "redox-delivery" || version != "v1")
    throw IoError("not a redox-delivery v1 file");
  std::vector<DeliveryRecord> log;
  log.reserve(files);
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    std::istringstream line(raw);
    DeliveryRecord rec;
    line >> rec.sn >> rec.requested >> rec.returned;
    if (!line) throw IoError("malformed delivery row: " + raw);
    log.push_back(rec);
  }
  return log;
}

TraceFileKind detect_kind(const std::string& header_line) {
  std::istringstream header(header_line);
  std::string tag;
  header >> tag;
  if (tag == "redox-layout") return TraceFileKind::layout;
  if (tag == "redox-trace") return TraceFileKind::trace;
  if (tag == "redox-delivery") return TraceFileKind::delivery;
  throw IoError("unrecognized file header: " + header_line);
}

std::string layout_to_string(const Layout& layout) {
  std::ostringstream out;
  write_layout_text(out, layout);
  return out.str();
}

std::string delivery_to_string(uint64_t files, const std::vector<DeliveryRecord>& log) {
  std::ostringstream out;
  write_delivery_text(out, files, log);
  return out.str();
}

}  // namespace redox
