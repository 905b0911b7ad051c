#pragma once

#include "fusec/term.hpp"

namespace fusec::testing {

struct CaseRewrite {
  const char* input;
  TermPath path;
  const char* expected;
};

// h (case s of inl x => l | inr y => r)  ~>  case s of inl x => h l | inr y => h r
inline const CaseRewrite kCaseRewrites[] = {
    {"\\s : 1 + Nat. (\\n : Nat. n + 1) (case s of inl u => 0 | inr n => n)", {0},
     "\\s : 1 + Nat. case s of inl u => (\\n : Nat. n + 1) 0 | inr n => (\\n : Nat. n + 1) n"},
    {"(\\n : Nat. n + 1) << (\\s : 1 + Nat. case s of inl u => 0 | inr n => n)", {},
     "\\s : 1 + Nat. case s of inl u => (\\n : Nat. n + 1) 0 | inr n => (\\n : Nat. n + 1) n"},
    {"\\x : Nat. \\s : 1 + Nat. (\\y : Nat. x + y) (case s of inl x => 0 | inr n => n)", {0, 0},
     "\\x : Nat. \\s : 1 + Nat. case s of inl w => (\\y : Nat. x + y) 0 | inr n => (\\y : Nat. x + y) n"},
    {"\\s : 1 + Nat. sum (case s of inl u => nil () | inr n => singleton n)", {0},
     "\\s : 1 + Nat. case s of inl u => sum (nil ()) | inr n => sum (singleton n)"},
    {"\\f : Nat -> Nat. \\s : 1 + Nat. f (case s of inl u => 1 | inr n => n + n)", {0, 0},
     "\\f : Nat -> Nat. \\s : 1 + Nat. case s of inl u => f 1 | inr n => f (n + n)"},
    {"\\s : 1 + NatList. (\\a : NatList. \\b : NatList. cat (a, b)) (nil ()) (case s of inl u => nil () | inr l => l)",
     {0},
     "\\s : 1 + NatList. case s of inl u => (\\a : NatList. \\b : NatList. cat (a, b)) (nil ()) (nil ()) "
     "| inr l => (\\a : NatList. \\b : NatList. cat (a, b)) (nil ()) l"},
    {"\\p : (1 + Nat) * Nat. (\\n : Nat. n + snd p) (case fst p of inl u => 0 | inr p => p)", {0},
     "\\p : (1 + Nat) * Nat. case fst p of inl u => (\\n : Nat. n + snd p) 0 | inr q => (\\n : Nat. n + snd p) q"},
    {"\\s : 1 + Nat. (\\g : Nat -> Nat. g 2) (case s of inl u => \\x : Nat. x | inr n => \\x : Nat. x + n)", {0},
     "\\s : 1 + Nat. case s of inl u => (\\g : Nat -> Nat. g 2) (\\x : Nat. x) "
     "| inr n => (\\g : Nat -> Nat. g 2) (\\x : Nat. x + n)"},
    {"\\s : 1 + Nat. \\t : 1 + Nat. (\\n : Nat. n) (case s of inl u => (case t of inl v => 0 | inr m => m) "
     "| inr n => n)",
     {0, 0},
     "\\s : 1 + Nat. \\t : 1 + Nat. case s of inl u => (\\n : Nat. n) (case t of inl v => 0 | inr m => m) "
     "| inr n => (\\n : Nat. n) n"},
    {"sum << (\\s : NL NatList. case s of inl u => nil () | inr c => in[NL] (inr[NL NatList] (fst c, snd c)))", {},
     "\\s : NL NatList. case s of inl u => sum (nil ()) | inr c => sum (in[NL] (inr[NL NatList] (fst c, snd c)))"},
};

}  // namespace fusec::testing
