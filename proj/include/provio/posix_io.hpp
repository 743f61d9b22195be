#pragma once

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "provio/sandbox.hpp"
#include "provio/tracker.hpp"

namespace provio {

enum class OpenMode { Read, Write, ReadWrite };

struct FileHandle {
  std::uint64_t id = 0;
  std::string path;  // relative to the sandbox root
  OpenMode mode = OpenMode::Read;
};

// POSIX-style file calls on sandboxed paths. Each successful call reports
// one event to `session`; a null session runs the calls untracked.
//
//   open(create=true)  -> Create  "posix_open"
//   open(create=false) -> Open    "posix_open"
//   read / write       -> Read / Write
//   fsync              -> Fsync
//   rename             -> Rename on the source path
//   mkdir              -> Create on a Directory entity
class PosixIo {
 public:
  explicit PosixIo(const Sandbox& sandbox, Session* session = nullptr)
      : sandbox_(sandbox), session_(session) {}
  ~PosixIo();

  PosixIo(const PosixIo&) = delete;
  PosixIo& operator=(const PosixIo&) = delete;

  // create=true truncates an existing file. Read mode cannot create.
  FileHandle open(std::string_view path, bool create, OpenMode mode);
  // Fills `buf` until it is full or the file ends; returns the byte count.
  std::size_t read(const FileHandle& h, std::span<char> buf);
  std::string read(const FileHandle& h, std::size_t max_bytes);
  std::size_t write(const FileHandle& h, std::string_view bytes);
  void fsync(const FileHandle& h);
  void close(const FileHandle& h);
  // Fails with Exists when `to` is taken.
  void rename(std::string_view from, std::string_view to);
  void mkdir(std::string_view path);

  const Sandbox& sandbox() const { return sandbox_; }

 private:
  struct OpenFile {
    int fd = -1;
    OpenMode mode = OpenMode::Read;
    std::string path;
  };
  OpenFile lookup(const FileHandle& h) const;

  const Sandbox& sandbox_;
  Session* session_;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, OpenFile> files_;
  std::uint64_t next_id_ = 1;
};

}  // namespace provio
