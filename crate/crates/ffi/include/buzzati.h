#ifndef BUZZATI_H
#define BUZZATI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum BuzzatiLegKind
#ifdef __cplusplus
  : uint32_t
#endif // __cplusplus
 {
  BUZZATI_LEG_KIND_DEPART_CARAVAN = 0,
  BUZZATI_LEG_KIND_ARRIVE_CITY = 1,
  BUZZATI_LEG_KIND_DEPART_CITY = 2,
  BUZZATI_LEG_KIND_ARRIVE_CARAVAN = 3,
};
#ifndef __cplusplus
typedef uint32_t BuzzatiLegKind;
#endif // __cplusplus

enum BuzzatiMode
#ifdef __cplusplus
  : uint32_t
#endif // __cplusplus
 {
  BUZZATI_MODE_CLASSICAL = 0,
  BUZZATI_MODE_RELATIVISTIC = 1,
};
#ifndef __cplusplus
typedef uint32_t BuzzatiMode;
#endif // __cplusplus

typedef enum BuzzatiStatus {
  BUZZATI_STATUS_OK = 0,
  BUZZATI_STATUS_NULL_POINTER = 1,
  BUZZATI_STATUS_SPEED_ORDER = 2,
  BUZZATI_STATUS_SUPERLUMINAL = 3,
  BUZZATI_STATUS_NON_POSITIVE = 4,
  BUZZATI_STATUS_MODE_MISMATCH = 5,
  BUZZATI_STATUS_OVERFLOW = 6,
  BUZZATI_STATUS_INVALID_TOUR = 7,
  BUZZATI_STATUS_INVALID_ARGUMENT = 8,
  BUZZATI_STATUS_PANIC = 9,
} BuzzatiStatus;

/**
 * Opaque schedule handle.
 */
typedef struct BuzzatiSchedule BuzzatiSchedule;

/**
 * Opaque simulation handle.
 */
typedef struct BuzzatiSimulation BuzzatiSimulation;

/**
 * Clock readings of one messenger at one departure from the caravan, in days.
 */
typedef struct BuzzatiRecord {
  uint32_t messenger;
  uint32_t tour;
  double city_frame_days;
  double caravan_proper_days;
  double messenger_proper_days;
  /**
   * Messenger clock on reaching the City; City time in classical mode.
   */
  double messenger_at_city_days;
} BuzzatiRecord;

typedef struct BuzzatiEvent {
  uint32_t messenger;
  /**
   * One of the `BuzzatiLegKind` values.
   */
  uint32_t kind;
  double time_city_days;
  double position;
  double proper_days;
} BuzzatiEvent;

typedef struct BuzzatiVerifySummary {
  bool passed;
  size_t compared;
  double max_departure_city_rel_error;
  double max_messenger_departure_rel_error;
  double max_messenger_at_city_rel_error;
} BuzzatiVerifySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *buzzati_last_error_message(void);

/**
 * Validates the speeds and writes `V_c / (V_m - V_c)` to `out_q`.
 *
 * # Safety
 * `out_q` must be NULL or point to writable memory for one `double`.
 */
enum BuzzatiStatus buzzati_q_factor(uint32_t mode,
                                    double convoy_speed,
                                    double courier_speed,
                                    double *out_q);

/**
 * Builds the schedule for `count` messengers numbered from `first_index`
 * over `tours` tours. Records are ordered by tour, then messenger.
 *
 * # Safety
 * `first_departures` must point to `count` doubles and `out` to writable
 * storage for one handle pointer.
 */
enum BuzzatiStatus buzzati_schedule_new(uint32_t mode,
                                        double convoy_speed,
                                        double courier_speed,
                                        const double *first_departures,
                                        size_t count,
                                        uint32_t first_index,
                                        uint32_t tours,
                                        struct BuzzatiSchedule **out);

/**
 * Number of records in the schedule; 0 for NULL.
 *
 * # Safety
 * `schedule` must be NULL or a live handle from `buzzati_schedule_new`.
 */
size_t buzzati_schedule_len(const struct BuzzatiSchedule *schedule);

/**
 * # Safety
 * `schedule` must be NULL or a live handle; `out` NULL or writable.
 */
enum BuzzatiStatus buzzati_schedule_get(const struct BuzzatiSchedule *schedule,
                                        size_t position,
                                        struct BuzzatiRecord *out);

/**
 * # Safety
 * `schedule` must be NULL or a handle not yet freed.
 */
void buzzati_schedule_free(struct BuzzatiSchedule *schedule);

/**
 * Simulates each messenger through its `tours`-th departure from the caravan.
 *
 * # Safety
 * As for `buzzati_schedule_new`.
 */
enum BuzzatiStatus buzzati_simulation_new(uint32_t mode,
                                          double convoy_speed,
                                          double courier_speed,
                                          const double *first_departures,
                                          size_t count,
                                          uint32_t first_index,
                                          uint32_t tours,
                                          struct BuzzatiSimulation **out);

/**
 * # Safety
 * `simulation` must be NULL or a live handle.
 */
size_t buzzati_simulation_len(const struct BuzzatiSimulation *simulation);

/**
 * # Safety
 * `simulation` must be NULL or a live handle; `out` NULL or writable.
 */
enum BuzzatiStatus buzzati_simulation_get(const struct BuzzatiSimulation *simulation,
                                          size_t position,
                                          struct BuzzatiEvent *out);

/**
 * # Safety
 * `simulation` must be NULL or a handle not yet freed.
 */
void buzzati_simulation_free(struct BuzzatiSimulation *simulation);

/**
 * Compares the simulation with the closed forms. A failed comparison is not
 * an error: the call returns `Ok` with `passed == false`.
 *
 * # Safety
 * As for `buzzati_schedule_new`; `out` must be writable.
 */
enum BuzzatiStatus buzzati_verify(uint32_t mode,
                                  double convoy_speed,
                                  double courier_speed,
                                  const double *first_departures,
                                  size_t count,
                                  uint32_t first_index,
                                  uint32_t tours,
                                  double threshold,
                                  struct BuzzatiVerifySummary *out);

/**
 * First-order City time of the `n`-th exchange with light messengers.
 *
 * # Safety
 * `out_days` must be NULL or writable.
 */
enum BuzzatiStatus buzzati_em_limit_city_time(double beta_c,
                                              double t1,
                                              uint32_t n,
                                              double *out_days);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BUZZATI_H */
