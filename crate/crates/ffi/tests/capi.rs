use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use buzzati_ffi::*;

fn last_error() -> String {
    let message = buzzati_last_error_message();
    assert!(!message.is_null());
    unsafe { CStr::from_ptr(message) }
        .to_string_lossy()
        .into_owned()
}

const CLASSICAL: u32 = BuzzatiMode::Classical as u32;
const RELATIVISTIC: u32 = BuzzatiMode::Relativistic as u32;

#[test]
fn q_factor_and_validation_codes() {
    let mut q = 0.0;
    unsafe {
        assert_eq!(
            buzzati_q_factor(CLASSICAL, 1.0, 1.5, &mut q),
            BuzzatiStatus::Ok
        );
        assert_eq!(q, 2.0);
        assert_eq!(
            buzzati_q_factor(RELATIVISTIC, 0.5, 0.75, &mut q),
            BuzzatiStatus::Ok
        );
        assert_eq!(q, 2.0);
        assert_eq!(
            buzzati_q_factor(CLASSICAL, 1.0, 1.0, &mut q),
            BuzzatiStatus::SpeedOrder
        );
        assert!(last_error().contains("must exceed"));
        assert_eq!(
            buzzati_q_factor(RELATIVISTIC, 1.0, 1.0, &mut q),
            BuzzatiStatus::Superluminal
        );
        assert_eq!(
            buzzati_q_factor(CLASSICAL, -1.0, 1.0, &mut q),
            BuzzatiStatus::NonPositive
        );
        assert_eq!(
            buzzati_q_factor(7, 1.0, 1.5, &mut q),
            BuzzatiStatus::InvalidArgument
        );
        assert_eq!(
            buzzati_q_factor(CLASSICAL, 1.0, 1.5, ptr::null_mut()),
            BuzzatiStatus::NullPointer
        );
    }
}

#[test]
fn classical_schedule_round_trip() {
    let t1: Vec<f64> = (2..=8).map(f64::from).collect();
    let mut handle = ptr::null_mut();
    unsafe {
        let status = buzzati_schedule_new(
            CLASSICAL,
            1.0,
            1.5,
            t1.as_ptr(),
            t1.len(),
            1,
            7,
            &mut handle,
        );
        assert_eq!(status, BuzzatiStatus::Ok);
        assert_eq!(buzzati_schedule_len(handle), 49);
        let mut record = BuzzatiRecord::default();
        assert_eq!(
            buzzati_schedule_get(handle, 48, &mut record),
            BuzzatiStatus::Ok
        );
        assert_eq!((record.messenger, record.tour), (7, 7));
        assert_eq!(record.city_frame_days, 125_000.0);
        assert_eq!(record.messenger_proper_days, 125_000.0);
        assert_eq!(
            buzzati_schedule_get(handle, 49, &mut record),
            BuzzatiStatus::InvalidArgument
        );
        assert_eq!(
            buzzati_schedule_get(handle, 0, ptr::null_mut()),
            BuzzatiStatus::NullPointer
        );
        buzzati_schedule_free(handle);
        assert_eq!(buzzati_schedule_len(ptr::null()), 0);
        buzzati_schedule_free(ptr::null_mut());
    }
}

#[test]
fn schedule_errors() {
    let t1 = [5.0];
    let mut handle = ptr::null_mut();
    unsafe {
        assert_eq!(
            buzzati_schedule_new(RELATIVISTIC, 0.5, 1.0, t1.as_ptr(), 1, 4, 3, &mut handle),
            BuzzatiStatus::Superluminal
        );
        assert_eq!(
            buzzati_schedule_new(CLASSICAL, 1.0, 1.5, t1.as_ptr(), 1, 1, 0, &mut handle),
            BuzzatiStatus::InvalidTour
        );
        assert_eq!(
            buzzati_schedule_new(CLASSICAL, 1.0, 1.5, ptr::null(), 1, 1, 3, &mut handle),
            BuzzatiStatus::NullPointer
        );
        assert_eq!(
            buzzati_schedule_new(CLASSICAL, 1.0, 1.5, t1.as_ptr(), 0, 1, 3, &mut handle),
            BuzzatiStatus::InvalidArgument
        );
        assert_eq!(
            buzzati_schedule_new(
                CLASSICAL,
                1.0,
                1.0 + 1e-12,
                t1.as_ptr(),
                1,
                1,
                1000,
                &mut handle
            ),
            BuzzatiStatus::Overflow
        );
        assert!(handle.is_null());
    }
}

#[test]
fn simulation_events() {
    let t1 = [2.0];
    let mut handle = ptr::null_mut();
    unsafe {
        assert_eq!(
            buzzati_simulation_new(CLASSICAL, 1.0, 1.5, t1.as_ptr(), 1, 1, 3, &mut handle),
            BuzzatiStatus::Ok
        );
        assert_eq!(buzzati_simulation_len(handle), 9);
        let mut event = BuzzatiEvent::default();
        assert_eq!(
            buzzati_simulation_get(handle, 3, &mut event),
            BuzzatiStatus::Ok
        );
        assert_eq!(event.kind, BuzzatiLegKind::ArriveCaravan as u32);
        assert!((event.time_city_days - 10.0).abs() < 1e-12);
        assert_eq!(
            buzzati_simulation_get(handle, 9, &mut event),
            BuzzatiStatus::InvalidArgument
        );
        buzzati_simulation_free(handle);
    }
}

#[test]
fn verification_and_light_limit() {
    let t1 = [5.0];
    let mut summary = BuzzatiVerifySummary::default();
    let mut days = 0.0;
    unsafe {
        assert_eq!(
            buzzati_verify(
                RELATIVISTIC,
                0.5,
                0.75,
                t1.as_ptr(),
                1,
                4,
                8,
                1e-9,
                &mut summary
            ),
            BuzzatiStatus::Ok
        );
        assert!(summary.passed);
        assert_eq!(summary.compared, 24);
        assert!(summary.max_messenger_at_city_rel_error <= 1e-9);
        assert_eq!(
            buzzati_verify(
                RELATIVISTIC,
                0.5,
                0.75,
                t1.as_ptr(),
                1,
                4,
                8,
                0.0,
                &mut summary
            ),
            BuzzatiStatus::Ok
        );
        assert!(!summary.passed);
        assert_eq!(
            buzzati_em_limit_city_time(0.01, 2.0, 2, &mut days),
            BuzzatiStatus::Ok
        );
        assert!((days - 2.04).abs() < 1e-15);
        assert_eq!(
            buzzati_em_limit_city_time(0.01, 2.0, 0, &mut days),
            BuzzatiStatus::InvalidTour
        );
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/capi-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent()
        .and_then(|deps| deps.parent())
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_against_header_and_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    assert!(
        lib_dir.join("libbuzzati_ffi.a").exists(),
        "static library missing in {}",
        lib_dir.display()
    );
    let out_dir = std::env::temp_dir().join(format!("buzzati-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let compile = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".to_string()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(lib_dir.join("libbuzzati_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(
        compile.status.success(),
        "{}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    std::fs::remove_dir_all(&out_dir).unwrap();
}
