/* Generated by cbindgen. Do not edit. */

#ifndef QUADINTERP_H
#define QUADINTERP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QiModel {
  QI_MODEL_QUADRATIC = 0,
  QI_MODEL_LINEAR = 1,
} QiModel;

typedef enum QiStatus {
  QI_STATUS_OK = 0,
  QI_STATUS_NULL_POINTER = 1,
  QI_STATUS_INVALID_ARGUMENT = 2,
  QI_STATUS_DIMENSION = 3,
  QI_STATUS_FORMAT = 4,
  QI_STATUS_IO = 5,
  QI_STATUS_SCENE = 6,
  QI_STATUS_PANIC = 7,
} QiStatus;

/**
 * Opaque flow field handle.
 */
typedef struct QiFlow QiFlow;

/**
 * Opaque image handle.
 */
typedef struct QiImage QiImage;

typedef struct QiHsParams {
  size_t levels;
  double alpha;
  size_t iterations;
  size_t warps;
} QiHsParams;

typedef struct QiInterpConfig {
  enum QiModel model;
  double sigma;
  double radius;
  size_t filter_radius;
  double filter_threshold;
  struct QiHsParams hs;
} QiInterpConfig;

typedef struct QiQuality {
  double psnr;
  double ssim;
  double ie;
} QiQuality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *qi_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qi_version(void);

struct QiHsParams qi_hs_params_default(void);

struct QiInterpConfig qi_interp_config_default(void);

/**
 * Creates an image from `width * height * channels` interleaved samples in [0, 1].
 */
enum QiStatus qi_image_new(size_t width,
                           size_t height,
                           size_t channels,
                           const double *data,
                           struct QiImage **out);

/**
 * Reads a binary PGM or PPM file.
 */
enum QiStatus qi_image_read(const char *path, struct QiImage **out);

enum QiStatus qi_image_write(const struct QiImage *image, const char *path);

/**
 * Writes width, height and channel count; any out-pointer may be null.
 */
enum QiStatus qi_image_dims(const struct QiImage *image,
                            size_t *width,
                            size_t *height,
                            size_t *channels);

/**
 * Copies the samples into `buffer`, which must hold exactly
 * `width * height * channels` values.
 */
enum QiStatus qi_image_copy_data(const struct QiImage *image, double *buffer, size_t len);

void qi_image_free(struct QiImage *image);

/**
 * Creates a flow field from `width * height` interleaved (u, v) pairs.
 */
enum QiStatus qi_flow_new(size_t width, size_t height, const double *uv, struct QiFlow **out);

/**
 * Reads a Middlebury `.flo` file.
 */
enum QiStatus qi_flow_read(const char *path, struct QiFlow **out);

enum QiStatus qi_flow_write(const struct QiFlow *flow, const char *path);

enum QiStatus qi_flow_dims(const struct QiFlow *flow, size_t *width, size_t *height);

/**
 * Copies interleaved (u, v) pairs into `buffer` of exactly `2 * width * height` values.
 */
enum QiStatus qi_flow_copy_data(const struct QiFlow *flow, double *buffer, size_t len);

void qi_flow_free(struct QiFlow *flow);

/**
 * Estimates flow from `from` to `to`. `params` may be null for defaults.
 */
enum QiStatus qi_estimate_flow(const struct QiImage *from,
                               const struct QiImage *to,
                               const struct QiHsParams *params,
                               struct QiFlow **out);

/**
 * Reverses a forward flow. When `holes` is non-null it receives one byte per
 * pixel (1 = hole) and `holes_len` must equal `width * height`.
 */
enum QiStatus qi_reverse_flow(const struct QiFlow *flow,
                              double sigma,
                              double radius,
                              struct QiFlow **out,
                              uint8_t *holes,
                              size_t holes_len);

/**
 * Medoid-filters a backward flow. `holes` (one byte per pixel, nonzero =
 * hole) may be null when there are no holes.
 */
enum QiStatus qi_filter_flow(const struct QiFlow *flow,
                             const uint8_t *holes,
                             size_t holes_len,
                             size_t radius,
                             double threshold,
                             struct QiFlow **out);

/**
 * Synthesizes the frame at time `t` in (0, 1) between `f0` and `f1`.
 *
 * `flows` is either null (flows are estimated) or an array of four handles
 * in the order 0->1, 0->-1, 1->0, 1->2. `config` may be null for defaults.
 */
enum QiStatus qi_interpolate(const struct QiImage *f_m1,
                             const struct QiImage *f0,
                             const struct QiImage *f1,
                             const struct QiImage *f2,
                             const struct QiFlow *const *flows,
                             const struct QiInterpConfig *config,
                             double t,
                             struct QiImage **out);

/**
 * PSNR, SSIM and interpolation error of `prediction` against `reference`.
 */
enum QiStatus qi_quality(const struct QiImage *reference,
                         const struct QiImage *prediction,
                         struct QiQuality *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADINTERP_H */
