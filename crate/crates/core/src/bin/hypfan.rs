fn main() -> std::process::ExitCode {
    hypfan::cli::main_with(std::env::args_os())
}
