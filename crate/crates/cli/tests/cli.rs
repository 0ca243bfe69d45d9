use std::process::{Command, Output};

fn ivp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivp")).args(args).output().expect("run ivp")
}

fn first_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().next().unwrap_or_default().to_string()
}

fn json_of(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn binomial_is_integer_valued_on_z2() {
    let o = ivp(&["intval", "--poly", "(X^2-X)/2", "--set", "full(2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "true");
}

#[test]
fn closures_of_punctured_integers_differ() {
    let o = ivp(&["adele-diff", "--set", "Z \\ (-7 mod 72)", "--pres", "2:1 mod 8; 3:2 mod 9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "true");
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("65 mod 72"), "{out}");
}

#[test]
fn x_contained_for_power_tail() {
    let o = ivp(&["nonunitary-contains", "--q", "X", "--tail", "power(1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "yes");
}

#[test]
fn json_output_carries_schema_and_config() {
    let o = ivp(&["--json", "--residue-cap", "4096", "intval", "--poly", "X/2", "--set", "full(2)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["answer"], false);
    assert_eq!(v["config"]["residue_cap"], 4096);
}

#[test]
fn emitted_ring_reparses_identically() {
    let o = ivp(&["--json", "globalize", "--parts", "2: ball(2, 1, 1); 3: pts(3; 0, 1)", "--tail", "units+p"]);
    assert_eq!(o.status.code(), Some(0));
    let ring = json_of(&o)["ring"].to_string();
    let eq = ivp(&["ring-eq", "--r1", &ring, "--r2", "ring(units+p; 2: ball(2, 1, 1); 3: pts(3; 0, 1))"]);
    assert_eq!(first_line(&eq), "true");
    // and emitting it again gives the same JSON
    let again = ivp(&["--json", "localize", "--ring", &ring, "--p", "2"]);
    let local = json_of(&again)["ring"].clone();
    assert_eq!(local["exceptional"][0]["set"], "ball(2, 1, 1)");
}

#[test]
fn emitted_representation_reparses_identically() {
    let o = ivp(&["--json", "rep-eq", "--family", "X^2 + 1", "--unitary", "2: seq(2; 0, 1, 0, +lim)", "--tail", "full"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    let rep = v["representation"].to_string();
    let back = json_of(&ivp(&["--json", "rep-eq", "--rep", &rep]));
    assert_eq!(back["representation"], v["representation"]);
    assert_eq!(back["ring"], v["ring"]);
}

#[test]
fn selftest_passes() {
    let o = ivp(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(first_line(&o), "true");
}

#[test]
fn parse_error_exits_one_with_position() {
    let o = ivp(&["member", "--alpha", "1", "--set", "ball(2, 1, 3) | ball(4, 0, 1)"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error:") && err.contains("position 21"), "{err}");
}

#[test]
fn undecided_answer_exits_two() {
    let o = ivp(&["simple", "--ring", "ring(units+p; 2: full(2); 3: full(3))"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(first_line(&o).starts_with("unknown"));
}

#[test]
fn witness_and_separating_polynomial_verify() {
    let o = ivp(&["witness", "--q", "X^2+1", "--family", "3: full(3); 7: full(7)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("verified: true"));
    let o = ivp(&["witness", "--set", "seq(2; 0, 1, 0, +lim)", "--alpha", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("verified: true"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("ivp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ivp.conf");
    std::fs::write(&path, "residue_cap = 512\nprime_scan_bound = 300\n").unwrap();
    let o = ivp(&["--json", "--config", path.to_str().unwrap(), "--prime-scan-bound", "400", "member", "--alpha", "0", "--set", "full(3)"]);
    let v = json_of(&o);
    assert_eq!(v["config"]["residue_cap"], 512);
    assert_eq!(v["config"]["prime_scan_bound"], 400);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn mismatched_witness_arguments_are_rejected() {
    let o = ivp(&["witness", "--q", "X"]);
    assert_eq!(o.status.code(), Some(1));
}
