namespace wiretap {}
