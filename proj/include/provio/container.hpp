#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "provio/sandbox.hpp"
#include "provio/tracker.hpp"

namespace provio {

// Single-file hierarchical object store standing in for an HDF5 file.
//
// Layout (integers little-endian, lengths and offsets 64-bit):
//   header  "PIOC" version:u8
//   record  'R' kind:u8 path_len path payload_len payload
//   index   'I' count { path_len path record_offset }
//   footer  'F' index_offset record_count "PIOC"
// Records are only ever appended. A write appends a new version of the
// object; the index points at the newest. flush() appends an index and a
// footer. Reopening trusts a trailing footer, otherwise it rebuilds the
// index by scanning records forward and ignores a torn tail.
class ContainerStore {
 public:
  static constexpr std::uint8_t kVersion = 1;

  // Truncates or creates the host file. Throws IoError(Busy) when this
  // process already has the file open.
  static std::shared_ptr<ContainerStore> create(const std::filesystem::path& host);
  // Returns the live store for `host` if one exists, else loads it.
  static std::shared_ptr<ContainerStore> open(const std::filesystem::path& host);

  ~ContainerStore();
  ContainerStore(const ContainerStore&) = delete;
  ContainerStore& operator=(const ContainerStore&) = delete;

  // Parent must be "/" or an existing Group (Attributes may also hang off
  // a Dataset). Throws MissingParent, Exists, or KindMismatch.
  void create_object(SubClass kind, const std::string& object_path,
                     std::string_view payload = {});
  // nullopt when the object does not exist.
  std::optional<SubClass> kind_of(const std::string& object_path) const;
  // Appends a new version: `bytes` alone, or the previous payload followed
  // by `bytes` when appending.
  void write_object(const std::string& object_path, std::string_view bytes, bool append);
  std::string read_object(const std::string& object_path) const;
  void flush();

  // (path, kind) sorted by path.
  std::vector<std::pair<std::string, SubClass>> list() const;
  std::uint64_t record_count() const;
  bool recovered_by_scan() const { return recovered_by_scan_; }
  const std::filesystem::path& host() const { return host_; }

 private:
  struct Entry {
    SubClass kind;
    std::uint64_t record_offset;
    std::uint64_t payload_offset;
    std::uint64_t payload_len;
  };

  ContainerStore(std::filesystem::path host, int fd);
  void load();
  bool load_from_footer(std::uint64_t size);
  void scan_records(std::uint64_t size);
  void append_record(SubClass kind, const std::string& path, std::string_view payload);
  void pwrite_all(std::string_view bytes, std::uint64_t offset);
  std::string pread_exact(std::uint64_t offset, std::uint64_t len) const;

  std::filesystem::path host_;
  int fd_;
  mutable std::mutex mutex_;
  std::map<std::string, Entry> index_;
  std::uint64_t end_ = 0;
  std::uint64_t records_ = 0;
  bool recovered_by_scan_ = false;
};

struct ContainerFile {
  std::uint64_t id = 0;
  std::string path;  // relative to the sandbox root
  std::shared_ptr<ContainerStore> store;
};

struct ObjectHandle {
  std::uint64_t id = 0;
  std::string file_path;
  std::string object_path;
  SubClass kind = SubClass::Group;
  std::shared_ptr<ContainerStore> store;
};

// HDF5-flavoured calls over ContainerStore. Every successful call reports
// one event named after the library API it mirrors (H5Fcreate, H5Dcreate2,
// H5Aread, ...). Read/write apply to Datasets and Attributes only; the
// other kinds support create and open.
class ContainerIo {
 public:
  explicit ContainerIo(const Sandbox& sandbox, Session* session = nullptr)
      : sandbox_(sandbox), session_(session) {}

  ContainerFile create_file(std::string_view path);
  ContainerFile open_file(std::string_view path);
  void flush(const ContainerFile& f);
  void close_file(const ContainerFile& f);

  ObjectHandle create_object(const ContainerFile& f, SubClass kind,
                             const std::string& object_path, std::string_view payload = {});
  ObjectHandle open_object(const ContainerFile& f, SubClass kind,
                           const std::string& object_path);
  std::string read(const ObjectHandle& h);
  std::size_t write(const ObjectHandle& h, std::string_view bytes, bool append = false);
  void close_object(const ObjectHandle& h);

 private:
  void check_file(const ContainerFile& f) const;
  void check_object(const ObjectHandle& h) const;

  const Sandbox& sandbox_;
  Session* session_;
  mutable std::mutex mutex_;
  std::unordered_set<std::uint64_t> open_files_;
  std::unordered_set<std::uint64_t> open_objects_;
  std::uint64_t next_id_ = 1;
};

// "H5Dcreate2", "H5Gopen", "H5Aread", ... for a kind and activity class.
const char* container_api_name(SubClass kind, SubClass api_class);

}  // namespace provio
