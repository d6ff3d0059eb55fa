use std::io::{stdin, stdout, BufWriter, Write};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let input = stdin();
    let mut locked = input.lock();
    let out = stdout();
    let mut writer = BufWriter::new(out.lock());
    let code = arena::cli::run_with_io(&argv, &mut locked, &mut writer);
    writer.flush().expect("stdout flushes");
    drop(writer);
    std::process::exit(code);
}
