#include "forgery/codec.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

#include "forgery/errors.hpp"

namespace forgery {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed: " + path.string());
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_trampoline(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, mgr->message);
    std::longjmp(mgr->jump, 1);
}

} // namespace

ImageBuffer decode_png(const std::uint8_t* bytes, std::size_t size) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&png, bytes, size))
        throw ParseError(std::string("PNG decode: ") + png.message);

    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    ImageBuffer img = ImageBuffer::create(static_cast<int>(png.width),
                                          static_cast<int>(png.height),
                                          color ? 3 : 1);
    if (!png_image_finish_read(&png, nullptr, img.data.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw ParseError("PNG decode: " + msg);
    }
    return img;
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    require_valid(img, "encode_png");
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png, nullptr, &size, 0, img.data.data(), 0,
                                   nullptr))
        throw Error(std::string("PNG encode (size pass): ") + png.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&png, out.data(), &size, 0, img.data.data(),
                                   0, nullptr))
        throw Error(std::string("PNG encode: ") + png.message);
    out.resize(size);
    return out;
}

ImageBuffer decode_jpeg(const std::uint8_t* bytes, std::size_t size) {
    jpeg_decompress_struct cinfo{};
    JpegErrorMgr err{};
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_trampoline;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw ParseError(std::string("JPEG decode: ") + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes, static_cast<unsigned long>(size));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int channels = cinfo.output_components;
    if (channels != 1 && channels != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw ParseError("JPEG decode: unsupported component count");
    }
    ImageBuffer img = ImageBuffer::create(static_cast<int>(cinfo.output_width),
                                          static_cast<int>(cinfo.output_height),
                                          channels);
    while (cinfo.output_scanline < cinfo.output_height) {
        std::uint8_t* row = img.data.data() +
                            static_cast<std::size_t>(cinfo.output_scanline) *
                                img.row_stride();
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
    require_valid(img, "encode_jpeg");
    if (quality < 1 || quality > 100)
        throw ParameterError("encode_jpeg: quality must be in [1,100]");

    jpeg_compress_struct cinfo{};
    JpegErrorMgr err{};
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_trampoline;

    unsigned char* buffer = nullptr;
    unsigned long buffer_size = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        std::free(buffer);
        throw Error(std::string("JPEG encode: ") + err.message);
    }

    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buffer, &buffer_size);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = img.channels;
    cinfo.in_color_space = img.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        const std::uint8_t* row =
            img.data.data() +
            static_cast<std::size_t>(cinfo.next_scanline) * img.row_stride();
        JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
        jpeg_write_scanlines(&cinfo, rows, 1);
    }
    jpeg_finish_compress(&cinfo);
    std::vector<std::uint8_t> out(buffer, buffer + buffer_size);
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    return out;
}

ImageBuffer load_image(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    const std::vector<std::uint8_t> bytes = read_file(path);
    try {
        if (ext == ".png")
            return decode_png(bytes.data(), bytes.size());
        if (ext == ".jpg" || ext == ".jpeg")
            return decode_jpeg(bytes.data(), bytes.size());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    throw UnsupportedError("load_image: unsupported extension '" + ext + "' (" +
                           path.string() + ")");
}

void save_image(const std::filesystem::path& path, const ImageBuffer& img) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") {
        write_file(path, encode_png(img));
        return;
    }
    if (ext == ".jpg" || ext == ".jpeg") {
        write_file(path, encode_jpeg(img));
        return;
    }
    throw UnsupportedError("save_image: unsupported extension '" + ext + "' (" +
                           path.string() + ")");
}

} // namespace forgery
