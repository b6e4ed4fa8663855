use std::process::ExitCode;

fn main() -> ExitCode {
    let (result, json) = skk::run(std::env::args_os());
    match (&result.json, json) {
        (Some(v), true) => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
        _ if result.code == 2 => eprint!("{}", with_newline(&result.report)),
        _ => print!("{}", with_newline(&result.report)),
    }
    ExitCode::from(result.code as u8)
}

fn with_newline(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}
