# kdelta app
