use std::process::Command;

fn blocknorm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blocknorm"))
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "verify",
        "--statement",
        "THM21,PROP39",
        "--n",
        "3",
        "--trials",
        "4",
        "--seed",
        "4",
    ];
    let run = |threads: &str| {
        let out = blocknorm()
            .args(args)
            .env("BLOCKNORM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("provenance");
        v
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn invalid_thread_cap_is_rejected() {
    let out = blocknorm()
        .args(["make", "--kind", "intro"])
        .env("BLOCKNORM_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BLOCKNORM_THREADS"));
}
