//! Porter stemmer (Porter 1980, "An algorithm for suffix stripping").
//!
//! This follows the author's maintained ANSI-C version, which departs from
//! the 1980 paper in two step-2 rules: `(m>0) bli -> ble` replaces
//! `(m>0) abli -> able`, and `(m>0) logi -> log` is added. The published
//! reference vocabulary corresponds to that version.
//!
//! Only ASCII-lowercase input is stemmed; tokens containing non-ASCII bytes
//! and tokens shorter than three characters are returned unchanged.

/// Stem one lowercase token.
pub fn porter_stem(token: &str) -> String {
    if token.len() <= 2 || !token.is_ascii() {
        return token.to_string();
    }
    let mut stemmer = Stemmer {
        buf: token.as_bytes().to_vec(),
        k: token.len(),
        j: 0,
    };
    stemmer.step1ab();
    stemmer.step1c();
    stemmer.step2();
    stemmer.step3();
    stemmer.step4();
    stemmer.step5();
    String::from_utf8(stemmer.buf[..stemmer.k].to_vec()).expect("ascii input stays ascii")
}

struct Stemmer {
    buf: Vec<u8>,
    /// Exclusive end of the current word.
    k: usize,
    /// Exclusive end of the stem left of the last matched suffix.
    j: usize,
}

impl Stemmer {
    fn is_consonant(&self, index: usize) -> bool {
        let mut i = index;
        let mut negate = false;
        loop {
            match self.buf[i] {
                b'a' | b'e' | b'i' | b'o' | b'u' => return negate,
                b'y' => {
                    if i == 0 {
                        return !negate;
                    }
                    // y after a consonant counts as a vowel
                    negate = !negate;
                    i -= 1;
                }
                _ => return !negate,
            }
        }
    }

    /// Number of vowel-consonant sequences in `buf[..j]` (the measure `m`).
    fn measure(&self) -> usize {
        let j = self.j;
        let mut i = 0;
        let mut m = 0;
        while i < j && self.is_consonant(i) {
            i += 1;
        }
        if i >= j {
            return 0;
        }
        i += 1;
        loop {
            while i < j && !self.is_consonant(i) {
                i += 1;
            }
            if i >= j {
                return m;
            }
            i += 1;
            m += 1;
            while i < j && self.is_consonant(i) {
                i += 1;
            }
            if i >= j {
                return m;
            }
            i += 1;
        }
    }

    fn has_vowel(&self) -> bool {
        (0..self.j).any(|i| !self.is_consonant(i))
    }

    /// True when `buf[index-1..=index]` is a doubled consonant.
    fn double_consonant(&self, index: usize) -> bool {
        index >= 1
            && index < self.k
            && self.buf[index] == self.buf[index - 1]
            && self.is_consonant(index)
    }

    /// Consonant-vowel-consonant ending at `index`, where the final
    /// consonant is not w, x or y (the `*o` condition).
    fn cvc(&self, index: usize) -> bool {
        if index < 2 || index >= self.k {
            return false;
        }
        if !self.is_consonant(index)
            || self.is_consonant(index - 1)
            || !self.is_consonant(index - 2)
        {
            return false;
        }
        !matches!(self.buf[index], b'w' | b'x' | b'y')
    }

    /// If the word ends with `suffix`, set `j` to the stem end and return true.
    fn ends(&mut self, suffix: &str) -> bool {
        let s = suffix.as_bytes();
        if s.len() > self.k || &self.buf[self.k - s.len()..self.k] != s {
            return false;
        }
        self.j = self.k - s.len();
        true
    }

    /// Overwrite the matched suffix with `replacement`.
    fn set_to(&mut self, replacement: &str) {
        let r = replacement.as_bytes();
        debug_assert!(self.j + r.len() <= self.buf.len());
        self.buf[self.j..self.j + r.len()].copy_from_slice(r);
        self.k = self.j + r.len();
    }

    /// `set_to` guarded by `m > 0`.
    fn replace_if_measure(&mut self, replacement: &str) {
        if self.measure() > 0 {
            self.set_to(replacement);
        }
    }

    /// Step 1a strips plurals, step 1b strips -ed/-ing with cleanup.
    fn step1ab(&mut self) {
        if self.buf[self.k - 1] == b's' {
            if self.ends("sses") {
                self.k -= 2;
            } else if self.ends("ies") {
                self.set_to("i");
            } else if self.buf[self.k - 2] != b's' {
                self.k -= 1;
            }
        }
        if self.ends("eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends("ed") || self.ends("ing")) && self.has_vowel() {
            self.k = self.j;
            if self.ends("at") {
                self.set_to("ate");
            } else if self.ends("bl") {
                self.set_to("ble");
            } else if self.ends("iz") {
                self.set_to("ize");
            } else if self.double_consonant(self.k - 1) {
                if !matches!(self.buf[self.k - 1], b'l' | b's' | b'z') {
                    self.k -= 1;
                }
            } else if self.measure() == 1 && self.cvc(self.k - 1) {
                self.j = self.k;
                self.set_to("e");
            }
        }
    }

    /// Step 1c turns terminal y to i when the stem contains a vowel.
    fn step1c(&mut self) {
        if self.ends("y") && self.has_vowel() {
            self.buf[self.k - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("ational", "ate"),
            ("tional", "tion"),
            ("enci", "ence"),
            ("anci", "ance"),
            ("izer", "ize"),
            ("bli", "ble"),
            ("alli", "al"),
            ("entli", "ent"),
            ("eli", "e"),
            ("ousli", "ous"),
            ("ization", "ize"),
            ("ation", "ate"),
            ("ator", "ate"),
            ("alism", "al"),
            ("iveness", "ive"),
            ("fulness", "ful"),
            ("ousness", "ous"),
            ("aliti", "al"),
            ("iviti", "ive"),
            ("biliti", "ble"),
            ("logi", "log"),
        ];
        for &(suffix, replacement) in RULES {
            if self.ends(suffix) {
                self.replace_if_measure(replacement);
                return;
            }
        }
    }

    fn step3(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("icate", "ic"),
            ("ative", ""),
            ("alize", "al"),
            ("iciti", "ic"),
            ("ical", "ic"),
            ("ful", ""),
            ("ness", ""),
        ];
        for &(suffix, replacement) in RULES {
            if self.ends(suffix) {
                self.replace_if_measure(replacement);
                return;
            }
        }
    }

    /// Step 4 drops the suffix outright when the remaining measure exceeds 1.
    fn step4(&mut self) {
        const SUFFIXES: &[&str] = &[
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
            "ou", "ism", "ate", "iti", "ous", "ive", "ize",
        ];
        for &suffix in SUFFIXES {
            if self.ends(suffix) {
                if suffix == "ion" && !(self.j >= 1 && matches!(self.buf[self.j - 1], b's' | b't'))
                {
                    continue;
                }
                if self.measure() > 1 {
                    self.k = self.j;
                }
                return;
            }
        }
    }

    /// Step 5a removes a terminal e, step 5b undoubles a terminal ll.
    fn step5(&mut self) {
        self.j = self.k;
        if self.buf[self.k - 1] == b'e' {
            self.j = self.k - 1;
            let m = self.measure();
            if m > 1 || (m == 1 && !self.cvc(self.k - 2)) {
                self.k -= 1;
            }
        }
        self.j = self.k;
        if self.buf[self.k - 1] == b'l' && self.double_consonant(self.k - 1) && self.measure() > 1 {
            self.k -= 1;
        }
    }
}
