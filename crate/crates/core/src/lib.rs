//! Wheeler DFAs: construction, Wheeler sorting and verification, and
//! minimization in time linear in the automaton size by way of the border
//! graph. De Bruijn WDFAs can be built from FASTA/FASTQ input, and a
//! brute-force oracle is provided for differential testing.
//!
//! ```
//! use wheelermin::{dbg::{KmerSet, NPolicy}, minimize::minimize_sorted};
//!
//! let ks = KmerSet::from_sequences([&b"ACGTTACGTA"[..]], 3, NPolicy::Split).unwrap();
//! let a = ks.build_wdfa();
//! let m = minimize_sorted(&a).unwrap();
//! assert!(m.automaton.num_states() <= a.num_states());
//! ```

pub mod alphabet;
pub mod automaton;
pub mod border;
pub mod dbg;
pub mod format;
pub mod minimize;
pub mod oracle;
pub mod report;
pub mod seqio;
pub mod synth;
pub mod wheeler;

pub use alphabet::{Alphabet, Symbol};
pub use automaton::{Violation, Wdfa};
pub use border::{BorderGraph, Mark};
pub use minimize::{minimize, minimize_sorted, Minimization, Partition};
pub use wheeler::{verify_axioms, WheelerOrder};
