fn ack(&'a self, n: &'a Nat<'a>, m: &'a Nat<'a>) -> &'a Nat<'a> {
  match n {
    &Nat::O(_) => { self.alloc(Nat::S(PhantomData, m)) },
    &Nat::S(_, p) => {
      let ackn = {
        let ackn = self.alloc(std::cell::Cell::new(None));
        ackn.set(Some(
          self.closure(move |m2| {
            match m2 {
              &Nat::O(_) => {
                self.ack(
                  p,
                  self.alloc(Nat::S(PhantomData, self.alloc(Nat::O(PhantomData))))
                )
              },
              &Nat::S(_, q) => { self.ack(p, ackn.get().unwrap()(q)) },
            }
          })));
        ackn.get().unwrap()
      };
      ackn(m)
    },
  }
}
