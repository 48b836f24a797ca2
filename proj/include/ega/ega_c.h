/* C interface to the egocentric activity recognition pipeline.
 *
 * All functions return ega_status; on failure ega_last_error() yields a
 * human-readable message for the calling thread. Handles are opaque and must
 * be released with the matching *_close function. Strings returned through
 * char** out-parameters must be released with ega_string_free.
 */
#ifndef EGA_C_H
#define EGA_C_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ega_status {
  EGA_OK = 0,
  EGA_ERR_VALIDATION = 1,
  EGA_ERR_IO = 2,
  EGA_ERR_NUMERIC = 3
} ega_status;

typedef struct ega_dataset ega_dataset;
typedef struct ega_codebook ega_codebook;

const char* ega_last_error(void);
void ega_string_free(char* s);

/* Returns the default run configuration as a JSON document. */
ega_status ega_default_config(char** config_json_out);

/* Dataset loading / synthesis. `preset` is one of "order-distinct",
 * "fusion", "separable", "chance"; spec_json may override preset fields
 * (classes, clips_per_class, length, channels, seed, ...). The synthesized
 * dataset is written under out_dir (sensor CSVs, trajectory CSVs,
 * manifest.json) and also returned as an open handle. */
ega_status ega_dataset_open(const char* manifest_path, ega_dataset** out);
ega_status ega_dataset_synth(const char* preset, const char* spec_json, const char* out_dir,
                             ega_dataset** out);
int ega_dataset_clip_count(const ega_dataset* dataset);
void ega_dataset_close(ega_dataset* dataset);

/* Codebook fitting on the whole dataset, save/load as a JSON artifact. */
ega_status ega_codebook_fit(const ega_dataset* dataset, const char* config_json,
                            ega_codebook** out);
ega_status ega_codebook_save(const ega_codebook* codebook, const char* path);
ega_status ega_codebook_open(const char* path, ega_codebook** out);
void ega_codebook_close(ega_codebook* codebook);

/* Encodes every eligible clip with a frozen codebook; refuses to run when the
 * codebook's model hash does not match config_json. Writes the matrix CSV to
 * out_csv_path and a sidecar meta JSON (hashes) to out_csv_path + ".meta.json". */
ega_status ega_encode_dataset(const ega_dataset* dataset, const ega_codebook* codebook,
                              const char* config_json, const char* out_csv_path);

/* Leakage-free stratified cross-validation of the configured method; returns
 * the evaluation report as JSON. */
ega_status ega_run_eval(const ega_dataset* dataset, const char* config_json, char** report_json);

/* FVS/TFVS accuracy grid over window x cluster counts; returns grid JSON. */
ega_status ega_sweep(const ega_dataset* dataset, const char* config_json, const int* windows,
                     int num_windows, const int* clusters, int num_clusters, char** grid_json);

#ifdef __cplusplus
}
#endif

#endif /* EGA_C_H */
