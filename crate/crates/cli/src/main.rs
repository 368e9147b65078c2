fn main() {
    println!("synrag");
}
