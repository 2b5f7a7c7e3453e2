#pragma once

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "specprint/errors.hpp"
#include "specprint/image.hpp"

namespace specprint {

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path);
    return data;
}

struct PngReadState {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->pos + len > st->size) png_error(png, "unexpected end of PNG stream");
    std::memcpy(out, st->data + st->pos, len);
    st->pos += len;
}

[[noreturn]] inline void png_throw(png_structp, png_const_charp msg) {
    throw FormatError(std::string("PNG: ") + (msg ? msg : "decode error"));
}

inline void png_quiet_warn(png_structp, png_const_charp) {}

inline RgbImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_throw,
                                             png_quiet_warn);
    if (!png) throw FormatError("PNG: cannot allocate reader");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw FormatError("PNG: cannot allocate info");
    }

    PngReadState state{bytes.data(), bytes.size(), 0};
    RgbImage out;
    try {
        png_set_read_fn(png, &state, png_mem_read);
        png_read_info(png, info);

        const png_uint_32 w = png_get_image_width(png, info);
        const png_uint_32 h = png_get_image_height(png, info);
        const int color = png_get_color_type(png, info);
        const int depth = png_get_bit_depth(png, info);

        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
        if (depth == 16) png_set_strip_16(png);  // keep high byte = truncation
        if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
        png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
        const int passes = png_set_interlace_handling(png);
        (void)passes;
        png_read_update_info(png, info);

        if (png_get_rowbytes(png, info) != static_cast<std::size_t>(w) * 4)
            throw FormatError("PNG: unexpected row layout in " + path);

        std::vector<std::uint8_t> rgba(static_cast<std::size_t>(w) * h * 4);
        std::vector<png_bytep> rows(h);
        for (png_uint_32 y = 0; y < h; ++y)
            rows[y] = rgba.data() + static_cast<std::size_t>(y) * w * 4;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
        png_destroy_read_struct(&png, &info, nullptr);

        out.width = static_cast<int>(w);
        out.height = static_cast<int>(h);
        out.pixels.resize(static_cast<std::size_t>(w) * h * 3);
        for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
            const unsigned a = rgba[i * 4 + 3];
            for (int ch = 0; ch < 3; ++ch) {
                // composite over white, round half up
                const unsigned c = rgba[i * 4 + ch];
                out.pixels[i * 3 + ch] =
                    static_cast<std::uint8_t>((a * c + (255u - a) * 255u + 127u) / 255u);
            }
        }
        return out;
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Corrupt-data warnings (truncated streams, bad markers) would otherwise
// decode to gray filler and skew dataset statistics; fail instead.
inline void jpeg_quiet(j_common_ptr cinfo, int msg_level) {
    if (msg_level < 0) cinfo->err->error_exit(cinfo);
}

inline RgbImage decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    jerr.pub.emit_message = jpeg_quiet;

    RgbImage out;
    std::vector<std::uint8_t> rowbuf;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw FormatError("JPEG: " + std::string(jerr.message) + " (" + path + ")");
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    rowbuf.resize(static_cast<std::size_t>(out.width) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        const int y = static_cast<int>(cinfo.output_scanline);
        JSAMPROW row = rowbuf.data();
        jpeg_read_scanlines(&cinfo, &row, 1);
        std::memcpy(&out.pixels[static_cast<std::size_t>(y) * out.width * 3], rowbuf.data(),
                    rowbuf.size());
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

}  // namespace detail

// Decode a PNG or JPEG file (sniffed by signature) into 8-bit sRGB. 16-bit
// channels truncate to their high byte; alpha composites over white.
inline RgbImage decode_image(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError("no such file: " + path);
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);

    static const std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0)
        return detail::decode_png(bytes, path);
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8)
        return detail::decode_jpeg(bytes, path);
    throw FormatError("not a PNG or JPEG file: " + path);
}

// 8-bit grayscale PNG with pinned encoder settings so identical inputs give
// identical bytes.
inline void write_png_gray8(const std::string& path, int width, int height,
                            const std::vector<std::uint8_t>& gray) {
    if (gray.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("write_png_gray8: buffer size mismatch");

    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot create " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              detail::png_throw, detail::png_quiet_warn);
    if (!png) {
        std::fclose(fp);
        throw IoError("PNG: cannot allocate writer");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        std::fclose(fp);
        throw IoError("PNG: cannot allocate info");
    }

    try {
        png_init_io(png, fp);
        png_set_compression_level(png, 6);
        png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < height; ++y)
            png_write_row(png, const_cast<png_bytep>(gray.data() + static_cast<std::size_t>(y) * width));
        png_write_end(png, info);
        png_destroy_write_struct(&png, &info);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw;
    }
    if (std::fclose(fp) != 0) throw IoError("close failed for " + path);
}

}  // namespace specprint
