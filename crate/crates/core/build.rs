// Record the flags that shape generated code so benchmark reports can say
// which build produced them.
fn main() {
    let keys = ["PROFILE", "OPT_LEVEL", "DEBUG", "TARGET", "CARGO_ENCODED_RUSTFLAGS", "CARGO_CFG_TARGET_FEATURE"];
    let flags: Vec<String> =
        keys.iter().map(|k| format!("{k}={}", std::env::var(k).unwrap_or_default().replace('\x1f', " "))).collect();
    println!("cargo:rustc-env=NORMSCALE_BUILD_FLAGS={}", flags.join(";"));
    for k in keys {
        println!("cargo:rerun-if-env-changed={k}");
    }
    println!("cargo:rerun-if-changed=build.rs");
}
