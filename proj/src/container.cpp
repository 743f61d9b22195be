#include "provio/container.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "instrument.hpp"

namespace provio {

namespace {

constexpr std::string_view kMagic = "PIOC";
constexpr std::uint64_t kHeaderSize = 5;
constexpr std::uint64_t kFooterSize = 21;

std::recursive_mutex& registry_mutex() {
  static std::recursive_mutex m;
  return m;
}

std::map<std::string, std::weak_ptr<ContainerStore>>& registry() {
  static std::map<std::string, std::weak_ptr<ContainerStore>> r;
  return r;
}

std::string registry_key(const std::filesystem::path& host) {
  return std::filesystem::weakly_canonical(std::filesystem::absolute(host)).string();
}

[[noreturn]] void throw_errno(const std::string& what) {
  int err = errno;
  throw IoError(err == ENOENT ? IoErrc::NotFound : IoErrc::System,
                what + ": " + std::strerror(err));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

bool is_object_kind(SubClass k) {
  switch (k) {
    case SubClass::Group:
    case SubClass::Dataset:
    case SubClass::Attribute:
    case SubClass::Datatype:
    case SubClass::Link:
      return true;
    default:
      return false;
  }
}

bool has_payload(SubClass k) { return k == SubClass::Dataset || k == SubClass::Attribute; }

void check_object_path(const std::string& p) {
  bool ok = p.size() > 1 && p.front() == '/' && p.back() != '/' &&
            p.find("//") == std::string::npos;
  if (ok) {
    for (std::string_view bad : {"/./", "/../"}) {
      if ((p + "/").find(bad) != std::string::npos) ok = false;
    }
  }
  if (!ok) throw IoError(IoErrc::NotFound, "invalid object path '" + p + "'");
}

std::string parent_of(const std::string& p) {
  auto slash = p.rfind('/');
  return slash == 0 ? "/" : p.substr(0, slash);
}

}  // namespace

ContainerStore::ContainerStore(std::filesystem::path host, int fd)
    : host_(std::move(host)), fd_(fd) {}

ContainerStore::~ContainerStore() {
  ::close(fd_);
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(registry_key(host_));
  if (it != registry().end() && it->second.expired()) registry().erase(it);
}

std::shared_ptr<ContainerStore> ContainerStore::create(const std::filesystem::path& host) {
  std::lock_guard lock(registry_mutex());
  auto key = registry_key(host);
  if (auto it = registry().find(key); it != registry().end() && !it->second.expired()) {
    throw IoError(IoErrc::Busy, "container is already open: " + host.string());
  }
  int fd = ::open(host.c_str(), O_RDWR | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw_errno("create container " + host.string());
  std::shared_ptr<ContainerStore> store(new ContainerStore(host, fd));
  std::string header(kMagic);
  header.push_back(static_cast<char>(kVersion));
  store->pwrite_all(header, 0);
  store->end_ = kHeaderSize;
  registry()[key] = store;
  return store;
}

std::shared_ptr<ContainerStore> ContainerStore::open(const std::filesystem::path& host) {
  std::lock_guard lock(registry_mutex());
  auto key = registry_key(host);
  if (auto it = registry().find(key); it != registry().end()) {
    if (auto live = it->second.lock()) return live;
  }
  int fd = ::open(host.c_str(), O_RDWR | O_CLOEXEC);
  if (fd < 0) throw_errno("open container " + host.string());
  std::shared_ptr<ContainerStore> store(new ContainerStore(host, fd));
  store->load();
  registry()[key] = store;
  return store;
}

void ContainerStore::pwrite_all(std::string_view bytes, std::uint64_t offset) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::pwrite(fd_, bytes.data() + done, bytes.size() - done,
                         static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write container " + host_.string());
    }
    done += static_cast<std::size_t>(n);
  }
}

std::string ContainerStore::pread_exact(std::uint64_t offset, std::uint64_t len) const {
  std::string out(len, '\0');
  std::size_t done = 0;
  while (done < len) {
    ssize_t n = ::pread(fd_, out.data() + done, len - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("read container " + host_.string());
    }
    if (n == 0) throw IoError(IoErrc::Corrupt, "unexpected end of " + host_.string());
    done += static_cast<std::size_t>(n);
  }
  return out;
}

void ContainerStore::load() {
  struct stat st {};
  if (::fstat(fd_, &st) != 0) throw_errno("stat " + host_.string());
  auto size = static_cast<std::uint64_t>(st.st_size);
  if (size < kHeaderSize) throw IoError(IoErrc::Corrupt, host_.string() + " is not a container");
  auto header = pread_exact(0, kHeaderSize);
  if (header.substr(0, 4) != kMagic || static_cast<std::uint8_t>(header[4]) != kVersion) {
    throw IoError(IoErrc::Corrupt, host_.string() + " is not a container");
  }
  if (!load_from_footer(size)) {
    index_.clear();
    recovered_by_scan_ = true;
    scan_records(size);
  }
}

bool ContainerStore::load_from_footer(std::uint64_t size) {
  if (size < kHeaderSize + kFooterSize) return false;
  try {
    auto footer = pread_exact(size - kFooterSize, kFooterSize);
    if (footer[0] != 'F' || footer.substr(17) != kMagic) return false;
    std::uint64_t index_at = get_u64(footer, 1);
    std::uint64_t records = get_u64(footer, 9);
    if (index_at < kHeaderSize || index_at + 9 > size - kFooterSize) return false;
    auto head = pread_exact(index_at, 9);
    if (head[0] != 'I') return false;
    std::uint64_t count = get_u64(head, 1);
    std::uint64_t pos = index_at + 9;
    std::map<std::string, Entry> index;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (pos + 8 > size) return false;
      std::uint64_t len = get_u64(pread_exact(pos, 8), 0);
      if (pos + 8 + len + 8 > size) return false;
      auto path = pread_exact(pos + 8, len);
      std::uint64_t at = get_u64(pread_exact(pos + 8 + len, 8), 0);
      pos += 16 + len;
      // Re-read the record header so the entry carries kind and payload span.
      auto rec = pread_exact(at, 10);
      if (rec[0] != 'R' || get_u64(rec, 2) != len) return false;
      auto kind = static_cast<SubClass>(static_cast<std::uint8_t>(rec[1]));
      if (!is_object_kind(kind)) return false;
      if (pread_exact(at + 10, len) != path) return false;
      std::uint64_t payload_len = get_u64(pread_exact(at + 10 + len, 8), 0);
      index[path] = Entry{kind, at, at + 18 + len, payload_len};
    }
    if (pos != size - kFooterSize) return false;
    index_ = std::move(index);
    records_ = records;
    end_ = size;
    return true;
  } catch (const IoError&) {
    return false;
  }
}

void ContainerStore::scan_records(std::uint64_t size) {
  auto bytes = pread_exact(0, size);
  std::uint64_t pos = kHeaderSize;
  std::uint64_t good = pos;
  records_ = 0;
  auto fits = [&](std::uint64_t at, std::uint64_t n) { return at <= size && n <= size - at; };
  while (pos < size) {
    char tag = bytes[pos];
    if (tag == 'R') {
      if (!fits(pos, 10)) break;
      auto kind = static_cast<SubClass>(static_cast<std::uint8_t>(bytes[pos + 1]));
      std::uint64_t len = get_u64(bytes, pos + 2);
      if (!is_object_kind(kind) || !fits(pos + 10, len) || !fits(pos + 10 + len, 8)) break;
      std::string path = bytes.substr(pos + 10, len);
      std::uint64_t payload_len = get_u64(bytes, pos + 10 + len);
      if (!fits(pos + 18 + len, payload_len)) break;
      index_[path] = Entry{kind, pos, pos + 18 + len, payload_len};
      ++records_;
      pos += 18 + len + payload_len;
    } else if (tag == 'I') {
      if (!fits(pos, 9)) break;
      std::uint64_t count = get_u64(bytes, pos + 1);
      std::uint64_t at = pos + 9;
      bool ok = true;
      for (std::uint64_t i = 0; i < count && ok; ++i) {
        if (!fits(at, 8)) {
          ok = false;
          break;
        }
        std::uint64_t len = get_u64(bytes, at);
        ok = fits(at + 8, len) && fits(at + 8 + len, 8);
        at += 16 + len;
      }
      if (!ok) break;
      pos = at;
    } else if (tag == 'F') {
      if (!fits(pos, kFooterSize)) break;
      pos += kFooterSize;
    } else {
      break;
    }
    good = pos;
  }
  end_ = good;
  if (good < size && ::ftruncate(fd_, static_cast<off_t>(good)) != 0) {
    throw_errno("truncate " + host_.string());
  }
}

void ContainerStore::append_record(SubClass kind, const std::string& path,
                                   std::string_view payload) {
  std::string rec;
  rec.reserve(18 + path.size() + payload.size());
  rec.push_back('R');
  rec.push_back(static_cast<char>(kind));
  put_u64(rec, path.size());
  rec += path;
  put_u64(rec, payload.size());
  rec += payload;
  pwrite_all(rec, end_);
  index_[path] = Entry{kind, end_, end_ + 18 + path.size(), payload.size()};
  end_ += rec.size();
  ++records_;
}

void ContainerStore::create_object(SubClass kind, const std::string& object_path,
                                   std::string_view payload) {
  if (!is_object_kind(kind)) {
    throw IoError(IoErrc::KindMismatch,
                  std::string(sub_class_name(kind)) + " is not a container object kind");
  }
  check_object_path(object_path);
  std::lock_guard lock(mutex_);
  if (index_.contains(object_path)) {
    throw IoError(IoErrc::Exists, "object exists: " + object_path);
  }
  auto parent = parent_of(object_path);
  if (parent != "/") {
    auto it = index_.find(parent);
    if (it == index_.end()) throw IoError(IoErrc::MissingParent, "missing parent " + parent);
    bool ok = it->second.kind == SubClass::Group ||
              (kind == SubClass::Attribute && it->second.kind == SubClass::Dataset);
    if (!ok) {
      throw IoError(IoErrc::KindMismatch, parent + " cannot hold a " +
                                              std::string(sub_class_name(kind)));
    }
  }
  append_record(kind, object_path, payload);
}

std::optional<SubClass> ContainerStore::kind_of(const std::string& object_path) const {
  std::lock_guard lock(mutex_);
  auto it = index_.find(object_path);
  if (it == index_.end()) return std::nullopt;
  return it->second.kind;
}

void ContainerStore::write_object(const std::string& object_path, std::string_view bytes,
                                  bool append) {
  std::lock_guard lock(mutex_);
  auto it = index_.find(object_path);
  if (it == index_.end()) throw IoError(IoErrc::NotFound, "no object " + object_path);
  if (!has_payload(it->second.kind)) {
    throw IoError(IoErrc::KindMismatch,
                  object_path + " is a " + std::string(sub_class_name(it->second.kind)));
  }
  Entry e = it->second;
  if (append) {
    std::string data = pread_exact(e.payload_offset, e.payload_len);
    data += bytes;
    append_record(e.kind, object_path, data);
  } else {
    append_record(e.kind, object_path, bytes);
  }
}

std::string ContainerStore::read_object(const std::string& object_path) const {
  std::lock_guard lock(mutex_);
  auto it = index_.find(object_path);
  if (it == index_.end()) throw IoError(IoErrc::NotFound, "no object " + object_path);
  if (!has_payload(it->second.kind)) {
    throw IoError(IoErrc::KindMismatch,
                  object_path + " is a " + std::string(sub_class_name(it->second.kind)));
  }
  return pread_exact(it->second.payload_offset, it->second.payload_len);
}

void ContainerStore::flush() {
  std::lock_guard lock(mutex_);
  std::string block;
  block.push_back('I');
  put_u64(block, index_.size());
  for (const auto& [path, e] : index_) {
    put_u64(block, path.size());
    block += path;
    put_u64(block, e.record_offset);
  }
  std::uint64_t index_at = end_;
  block.push_back('F');
  put_u64(block, index_at);
  put_u64(block, records_);
  block += kMagic;
  pwrite_all(block, end_);
  end_ += block.size();
  if (::fsync(fd_) != 0) throw_errno("fsync " + host_.string());
}

std::vector<std::pair<std::string, SubClass>> ContainerStore::list() const {
  std::lock_guard lock(mutex_);
  std::vector<std::pair<std::string, SubClass>> out;
  for (const auto& [path, e] : index_) out.emplace_back(path, e.kind);
  return out;
}

std::uint64_t ContainerStore::record_count() const {
  std::lock_guard lock(mutex_);
  return records_;
}

const char* container_api_name(SubClass kind, SubClass api) {
  switch (api) {
    case SubClass::Create:
      switch (kind) {
        case SubClass::File: return "H5Fcreate";
        case SubClass::Group: return "H5Gcreate";
        case SubClass::Dataset: return "H5Dcreate2";
        case SubClass::Attribute: return "H5Acreate";
        case SubClass::Datatype: return "H5Tcreate";
        case SubClass::Link: return "H5Lcreate";
        default: break;
      }
      break;
    case SubClass::Open:
      switch (kind) {
        case SubClass::File: return "H5Fopen";
        case SubClass::Group: return "H5Gopen";
        case SubClass::Dataset: return "H5Dopen";
        case SubClass::Attribute: return "H5Aopen";
        case SubClass::Datatype: return "H5Topen";
        case SubClass::Link: return "H5Lopen";
        default: break;
      }
      break;
    case SubClass::Read:
      if (kind == SubClass::Dataset) return "H5Dread";
      if (kind == SubClass::Attribute) return "H5Aread";
      break;
    case SubClass::Write:
      if (kind == SubClass::Dataset) return "H5Dwrite";
      if (kind == SubClass::Attribute) return "H5Awrite";
      break;
    case SubClass::Fsync:
      if (kind == SubClass::File) return "H5Fflush";
      break;
    default:
      break;
  }
  throw std::invalid_argument("no container API for " + std::string(sub_class_name(kind)) +
                              " " + std::string(sub_class_name(api)));
}

ContainerFile ContainerIo::create_file(std::string_view path) {
  std::string rel = sandbox_.canonical(path);
  auto host = sandbox_.resolve(rel);
  auto store = detail::instrumented(session_, SubClass::Create, "H5Fcreate", SubClass::File, rel,
                                    [&] { return ContainerStore::create(host); });
  std::lock_guard lock(mutex_);
  ContainerFile f{next_id_++, rel, std::move(store)};
  open_files_.insert(f.id);
  if (session_) session_->object_opened(SubClass::File, rel);
  return f;
}

ContainerFile ContainerIo::open_file(std::string_view path) {
  std::string rel = sandbox_.canonical(path);
  auto host = sandbox_.resolve(rel);
  auto store = detail::instrumented(session_, SubClass::Open, "H5Fopen", SubClass::File, rel,
                                    [&] { return ContainerStore::open(host); });
  std::lock_guard lock(mutex_);
  ContainerFile f{next_id_++, rel, std::move(store)};
  open_files_.insert(f.id);
  if (session_) session_->object_opened(SubClass::File, rel);
  return f;
}

void ContainerIo::check_file(const ContainerFile& f) const {
  std::lock_guard lock(mutex_);
  if (!f.store || !open_files_.contains(f.id)) {
    throw IoError(IoErrc::Closed, "container " + f.path + " is not open");
  }
}

void ContainerIo::check_object(const ObjectHandle& h) const {
  std::lock_guard lock(mutex_);
  if (!h.store || !open_objects_.contains(h.id)) {
    throw IoError(IoErrc::Closed, "object " + h.object_path + " is not open");
  }
}

void ContainerIo::flush(const ContainerFile& f) {
  check_file(f);
  detail::instrumented(session_, SubClass::Fsync, "H5Fflush", SubClass::File, f.path,
                       [&] { f.store->flush(); });
}

void ContainerIo::close_file(const ContainerFile& f) {
  {
    std::lock_guard lock(mutex_);
    if (open_files_.erase(f.id) == 0) {
      throw IoError(IoErrc::Closed, "container " + f.path + " is not open");
    }
  }
  if (session_) session_->object_closed(SubClass::File, f.path);
}

ObjectHandle ContainerIo::create_object(const ContainerFile& f, SubClass kind,
                                        const std::string& object_path,
                                        std::string_view payload) {
  check_file(f);
  if (!is_object_kind(kind)) {
    throw IoError(IoErrc::KindMismatch,
                  std::string(sub_class_name(kind)) + " is not a container object kind");
  }
  detail::instrumented(session_, SubClass::Create, container_api_name(kind, SubClass::Create),
                       kind, object_path,
                       [&] { f.store->create_object(kind, object_path, payload); });
  std::lock_guard lock(mutex_);
  ObjectHandle h{next_id_++, f.path, object_path, kind, f.store};
  open_objects_.insert(h.id);
  if (session_) session_->object_opened(kind, object_path);
  return h;
}

ObjectHandle ContainerIo::open_object(const ContainerFile& f, SubClass kind,
                                      const std::string& object_path) {
  check_file(f);
  if (!is_object_kind(kind)) {
    throw IoError(IoErrc::KindMismatch,
                  std::string(sub_class_name(kind)) + " is not a container object kind");
  }
  detail::instrumented(session_, SubClass::Open, container_api_name(kind, SubClass::Open),
                       kind, object_path, [&] {
                         auto actual = f.store->kind_of(object_path);
                         if (!actual) {
                           throw IoError(IoErrc::NotFound, "no object " + object_path);
                         }
                         if (*actual != kind) {
                           throw IoError(IoErrc::KindMismatch,
                                         object_path + " is a " +
                                             std::string(sub_class_name(*actual)));
                         }
                       });
  std::lock_guard lock(mutex_);
  ObjectHandle h{next_id_++, f.path, object_path, kind, f.store};
  open_objects_.insert(h.id);
  if (session_) session_->object_opened(kind, object_path);
  return h;
}

std::string ContainerIo::read(const ObjectHandle& h) {
  check_object(h);
  if (!has_payload(h.kind)) {
    throw IoError(IoErrc::KindMismatch,
                  "cannot read a " + std::string(sub_class_name(h.kind)));
  }
  return detail::instrumented(session_, SubClass::Read, container_api_name(h.kind, SubClass::Read),
                              h.kind, h.object_path,
                              [&] { return h.store->read_object(h.object_path); });
}

std::size_t ContainerIo::write(const ObjectHandle& h, std::string_view bytes, bool append) {
  check_object(h);
  if (!has_payload(h.kind)) {
    throw IoError(IoErrc::KindMismatch,
                  "cannot write a " + std::string(sub_class_name(h.kind)));
  }
  return detail::instrumented(session_, SubClass::Write,
                              container_api_name(h.kind, SubClass::Write), h.kind,
                              h.object_path, [&] {
                                h.store->write_object(h.object_path, bytes, append);
                                return bytes.size();
                              });
}

void ContainerIo::close_object(const ObjectHandle& h) {
  {
    std::lock_guard lock(mutex_);
    if (open_objects_.erase(h.id) == 0) {
      throw IoError(IoErrc::Closed, "object " + h.object_path + " is not open");
    }
  }
  if (session_) session_->object_closed(h.kind, h.object_path);
}

}  // namespace provio
