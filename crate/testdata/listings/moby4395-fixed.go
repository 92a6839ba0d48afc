package main

type Error interface{}

func run(f func() Error) chan Error {
	ch := make(chan Error)
	go func() {
		ch <- f()
	}()
	return ch
}

func main() {
	err := run(func() Error { return nil })
	<-err
}
