#include "provio/posix_io.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>

#include "instrument.hpp"

namespace provio {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  int err = errno;
  IoErrc code = IoErrc::System;
  if (err == ENOENT) code = IoErrc::NotFound;
  if (err == EEXIST) code = IoErrc::Exists;
  throw IoError(code, what + ": " + std::strerror(err));
}

}  // namespace

PosixIo::~PosixIo() {
  for (auto& [id, f] : files_) ::close(f.fd);
}

FileHandle PosixIo::open(std::string_view path, bool create, OpenMode mode) {
  std::string rel = sandbox_.canonical(path);
  auto full = sandbox_.resolve(rel);
  if (create && mode == OpenMode::Read) {
    throw IoError(IoErrc::BadMode, "cannot create " + rel + " read-only");
  }
  int flags = mode == OpenMode::Read    ? O_RDONLY
              : mode == OpenMode::Write ? O_WRONLY
                                        : O_RDWR;
  if (create) flags |= O_CREAT | O_TRUNC;
  flags |= O_CLOEXEC;

  SubClass api = create ? SubClass::Create : SubClass::Open;
  int fd = detail::instrumented(session_, api, "posix_open", SubClass::File, rel, [&] {
    int fd = ::open(full.c_str(), flags, 0644);
    if (fd < 0) throw_errno("open " + rel);
    return fd;
  });

  std::lock_guard lock(mutex_);
  FileHandle h{next_id_++, rel, mode};
  files_.emplace(h.id, OpenFile{fd, mode, rel});
  if (session_) session_->object_opened(SubClass::File, rel);
  return h;
}

PosixIo::OpenFile PosixIo::lookup(const FileHandle& h) const {
  std::lock_guard lock(mutex_);
  auto it = files_.find(h.id);
  if (it == files_.end()) {
    throw IoError(IoErrc::Closed, "file handle " + std::to_string(h.id) + " is not open");
  }
  return it->second;
}

std::size_t PosixIo::read(const FileHandle& h, std::span<char> buf) {
  OpenFile f = lookup(h);
  if (f.mode == OpenMode::Write) {
    throw IoError(IoErrc::BadMode, f.path + " is open write-only");
  }
  return detail::instrumented(session_, SubClass::Read, "posix_read", SubClass::File, f.path, [&] {
    std::size_t done = 0;
    while (done < buf.size()) {
      ssize_t n = ::read(f.fd, buf.data() + done, buf.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("read " + f.path);
      }
      if (n == 0) break;
      done += static_cast<std::size_t>(n);
    }
    return done;
  });
}

std::string PosixIo::read(const FileHandle& h, std::size_t max_bytes) {
  std::string out(max_bytes, '\0');
  out.resize(read(h, std::span<char>(out.data(), out.size())));
  return out;
}

std::size_t PosixIo::write(const FileHandle& h, std::string_view bytes) {
  OpenFile f = lookup(h);
  if (f.mode == OpenMode::Read) {
    throw IoError(IoErrc::BadMode, f.path + " is open read-only");
  }
  return detail::instrumented(session_, SubClass::Write, "posix_write", SubClass::File, f.path, [&] {
    std::size_t done = 0;
    while (done < bytes.size()) {
      ssize_t n = ::write(f.fd, bytes.data() + done, bytes.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("write " + f.path);
      }
      done += static_cast<std::size_t>(n);
    }
    return done;
  });
}

void PosixIo::fsync(const FileHandle& h) {
  OpenFile f = lookup(h);
  detail::instrumented(session_, SubClass::Fsync, "posix_fsync", SubClass::File, f.path, [&] {
    if (::fsync(f.fd) != 0) throw_errno("fsync " + f.path);
  });
}

void PosixIo::close(const FileHandle& h) {
  OpenFile f;
  {
    std::lock_guard lock(mutex_);
    auto it = files_.find(h.id);
    if (it == files_.end()) {
      throw IoError(IoErrc::Closed, "file handle " + std::to_string(h.id) + " is not open");
    }
    f = it->second;
    files_.erase(it);
  }
  ::close(f.fd);
  if (session_) session_->object_closed(SubClass::File, f.path);
}

void PosixIo::rename(std::string_view from, std::string_view to) {
  std::string src = sandbox_.canonical(from);
  std::string dst = sandbox_.canonical(to);
  auto full_src = sandbox_.resolve(src);
  auto full_dst = sandbox_.resolve(dst);
  detail::instrumented(session_, SubClass::Rename, "posix_rename", SubClass::File, src, [&] {
    if (!std::filesystem::exists(full_src)) {
      throw IoError(IoErrc::NotFound, "rename source missing: " + src);
    }
    if (std::filesystem::exists(full_dst)) {
      throw IoError(IoErrc::Exists, "rename destination exists: " + dst);
    }
    if (::rename(full_src.c_str(), full_dst.c_str()) != 0) throw_errno("rename " + src);
  });
}

void PosixIo::mkdir(std::string_view path) {
  std::string rel = sandbox_.canonical(path);
  auto full = sandbox_.resolve(rel);
  detail::instrumented(session_, SubClass::Create, "posix_mkdir", SubClass::Directory, rel, [&] {
    if (::mkdir(full.c_str(), 0755) != 0) throw_errno("mkdir " + rel);
  });
}

}  // namespace provio
